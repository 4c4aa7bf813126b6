#include <zstar/cli/app.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace zstar::cli
{

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidIndex:
    case ErrorKind::InvalidNode:
    case ErrorKind::CorruptCache:
        return 1;
    case ErrorKind::DivergentValue:
    case ErrorKind::NotInDomain:
    case ErrorKind::OutOfDomain:
    case ErrorKind::BelowRange:
    case ErrorKind::OutOfRange:
    case ErrorKind::UnboundedFamily:
        return 2;
    case ErrorKind::PrecisionInsufficient:
    case ErrorKind::NonTerminating:
        return 3;
    }
    return 1;
}

namespace
{

[[noreturn]] void bad_number(const std::string &s)
{
    raise(ErrorKind::InvalidIndex, "not a decimal or rational number: '" + s + "'");
}

bool all_digits(const std::string &s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

mpz_class pow10(long e)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
    return r;
}

} // namespace

mpq_class parse_rational(const std::string &s)
{
    std::string body = s;
    bool negative = false;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
        negative = body[0] == '-';
        body.erase(0, 1);
    }
    mpq_class r;
    if (const auto slash = body.find('/'); slash != std::string::npos) {
        const std::string num = body.substr(0, slash), den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den) || mpz_class(den) == 0) {
            bad_number(s);
        }
        r = mpq_class(mpz_class(num), mpz_class(den));
    } else {
        long exponent = 0;
        if (const auto e = body.find_first_of("eE"); e != std::string::npos) {
            std::string ex = body.substr(e + 1);
            body.resize(e);
            const bool neg_ex = !ex.empty() && ex[0] == '-';
            if (!ex.empty() && (ex[0] == '-' || ex[0] == '+')) {
                ex.erase(0, 1);
            }
            if (!all_digits(ex) || ex.size() > 6) {
                bad_number(s);
            }
            exponent = std::stol(ex) * (neg_ex ? -1 : 1);
        }
        std::string int_part = body, frac_part;
        if (const auto dot = body.find('.'); dot != std::string::npos) {
            int_part = body.substr(0, dot);
            frac_part = body.substr(dot + 1);
        }
        if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
            (!frac_part.empty() && !all_digits(frac_part))) {
            bad_number(s);
        }
        const mpz_class mant(int_part + frac_part == "" ? "0" : int_part + frac_part);
        exponent -= static_cast<long>(frac_part.size());
        r = exponent >= 0 ? mpq_class(mant * pow10(exponent)) : mpq_class(mant, pow10(-exponent));
    }
    r.canonicalize();
    return negative ? mpq_class(-r) : r;
}

std::vector<int> parse_digits(const std::string &s)
{
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!all_digits(item) || item.size() > 6) {
            raise(ErrorKind::InvalidIndex, "digit lists are comma-separated positive integers: '" + s + "'");
        }
        out.push_back(std::stoi(item));
    }
    if (out.empty()) {
        raise(ErrorKind::InvalidIndex, "empty digit list");
    }
    return out;
}

} // namespace zstar::cli
