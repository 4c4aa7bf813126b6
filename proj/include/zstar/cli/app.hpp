#ifndef ZSTAR_CLI_APP_HPP
#define ZSTAR_CLI_APP_HPP

#include <zstar/error.hpp>

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <vector>

namespace zstar::cli
{

// Exit status: 0 success, 1 usage or malformed input, 2 domain errors,
// 3 precision exhausted.
int exit_code(ErrorKind kind);

// "5", "-3.2", "1e-8", "2.5E3", "7/3" as exact rationals; InvalidIndex otherwise.
mpq_class parse_rational(const std::string &s);
// "2,1,1"; InvalidIndex on anything else.
std::vector<int> parse_digits(const std::string &s);

// args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace zstar::cli

#endif
