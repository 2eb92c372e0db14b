#ifndef WEILFORGE_RATIONAL_HPP
#define WEILFORGE_RATIONAL_HPP

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace weilforge {

using Rat = mpq_class;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Strict rational literal: [-]digits[/digits].  Floating-point forms are rejected.
inline Rat parse_rational(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    std::size_t num_begin = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == num_begin) throw ParseError("invalid rational literal '" + s + "'");
    std::string num = s.substr(0, i);
    std::string den = "1";
    if (i < s.size()) {
        if (s[i] != '/') throw ParseError("invalid rational literal '" + s + "'");
        ++i;
        std::size_t den_begin = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == den_begin || i != s.size())
            throw ParseError("invalid rational literal '" + s + "'");
        den = s.substr(den_begin);
    }
    mpz_class n(num), d(den);
    if (d == 0) throw ParseError("zero denominator in '" + s + "'");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

inline std::string rat_to_string(const Rat& r) {
    return r.get_str();
}

} // namespace weilforge

#endif
