#ifndef FOCK_ZEROS_CLI_FUNCTION_SPEC_HPP
#define FOCK_ZEROS_CLI_FUNCTION_SPEC_HPP

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "../canonical_function.hpp"
#include "../errors.hpp"
#include "../lattice.hpp"
#include "../sigma.hpp"

namespace fock_zeros::cli
{

/// Malformed user input (function descriptor, complex literal, flag value).
class parse_error : public error
{
    public:
        using error::error;
};

/// An entire polynomial without a sigma factor (the grammar's `poly(...)` head).
struct polynomial_function
{
    polynomial poly;

    log_complex operator()(const complex &z) const { return log_complex::from_value(poly(z)); }

    std::string describe() const
    {
        std::ostringstream os;
        os.precision(17);
        os << "poly(";
        for (std::size_t i = 0; i < poly.coeffs().size(); ++i) {
            const complex c = poly.coeffs()[i];
            os << (i ? ", " : "") << c.real();
            if (c.imag() != 0.0) {
                os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
            }
        }
        os << ")";
        return os.str();
    }
};

using spec_function = std::variant<canonical_function, polynomial_function>;

namespace detail
{

class cursor
{
    public:
        explicit cursor(std::string_view s) : s_(s) {}

        void skip_ws()
        {
            while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
        }

        bool done()
        {
            skip_ws();
            return pos_ >= s_.size();
        }

        bool accept(std::string_view tok)
        {
            skip_ws();
            if (s_.substr(pos_, tok.size()) == tok) {
                pos_ += tok.size();
                return true;
            }
            return false;
        }

        void expect(std::string_view tok)
        {
            if (!accept(tok)) {
                fail("expected '" + std::string(tok) + "'");
            }
        }

        std::int64_t integer()
        {
            skip_ws();
            std::int64_t v = 0;
            const char *b = s_.data() + pos_;
            const auto [p, ec] = std::from_chars(b, s_.data() + s_.size(), v);
            if (ec != std::errc{}) {
                fail("expected an integer");
            }
            pos_ += static_cast<std::size_t>(p - b);
            return v;
        }

        /// Raw text up to (not including) the next ',' or ')'.
        std::string item()
        {
            skip_ws();
            const std::size_t start = pos_;
            while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ')') {
                ++pos_;
            }
            return std::string(s_.substr(start, pos_ - start));
        }

        [[noreturn]] void fail(const std::string &msg) const
        {
            throw parse_error("function spec: " + msg + " at position " + std::to_string(pos_) + " in \""
                              + std::string(s_) + "\"");
        }

    private:
        std::string_view s_;
        std::size_t pos_ = 0;
};

inline double parse_real(std::string_view t)
{
    std::string s(t);
    if (s.empty()) {
        throw parse_error("empty number");
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        throw parse_error("malformed number '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) {
        throw parse_error("malformed number '" + s + "'");
    }
    return v;
}

}

/// Complex literal: "x", "x+yi", "x-yi", "yi", "i", "-i" or "x,y".
inline complex parse_complex(std::string_view text)
{
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            s.push_back(c);
        }
    }
    if (s.empty()) {
        throw parse_error("empty complex literal");
    }
    if (const auto comma = s.find(','); comma != std::string::npos) {
        return {detail::parse_real(s.substr(0, comma)), detail::parse_real(s.substr(comma + 1))};
    }
    if (s.back() != 'i' && s.back() != 'j') {
        return {detail::parse_real(s), 0.0};
    }
    s.pop_back();
    // split at the last sign that is not part of an exponent
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto imag_part = [](const std::string &t) {
        if (t.empty() || t == "+") {
            return 1.0;
        }
        if (t == "-") {
            return -1.0;
        }
        return detail::parse_real(t);
    };
    if (split == std::string::npos) {
        return {0.0, imag_part(s)};
    }
    return {detail::parse_real(s.substr(0, split)), imag_part(s.substr(split))};
}

/// Parse a function descriptor.
/**
 * Grammar:
 *
 *     spec    := head divisor* factor*
 *     head    := "sigma" | poly
 *     divisor := "/" "(" "z" "-" "w(" int "," int ")" ")"
 *     factor  := "*" poly
 *     poly    := "poly(" complex ("," complex)* ")"      coefficients c0, c1, ...
 *
 * Divisors are only allowed after "sigma"; w(m,n) is the lattice point of index (m,n).
 */
inline spec_function parse_function_spec(std::string_view text, const std::shared_ptr<const sigma_evaluator> &sigma)
{
    detail::cursor cur(text);
    auto parse_poly = [&]() {
        cur.expect("poly");
        cur.expect("(");
        std::vector<complex> coeffs;
        do {
            const std::string item = cur.item();
            try {
                coeffs.push_back(parse_complex(item));
            } catch (const parse_error &e) {
                cur.fail(e.what());
            }
        } while (cur.accept(","));
        cur.expect(")");
        return polynomial(std::move(coeffs));
    };

    bool has_sigma = false;
    polynomial poly;
    if (cur.accept("sigma")) {
        has_sigma = true;
    } else {
        poly = parse_poly();
    }
    std::vector<lattice_index> divisors;
    while (cur.accept("/")) {
        if (!has_sigma) {
            cur.fail("divisors need a sigma head");
        }
        cur.expect("(");
        cur.expect("z");
        cur.expect("-");
        cur.expect("w(");
        const auto m = cur.integer();
        cur.expect(",");
        const auto n = cur.integer();
        cur.expect(")");
        cur.expect(")");
        divisors.push_back({m, n});
    }
    while (cur.accept("*")) {
        poly = poly * parse_poly();
    }
    if (!cur.done()) {
        cur.fail("unexpected trailing input");
    }
    if (!has_sigma) {
        return polynomial_function{poly};
    }
    try {
        return canonical_function(sigma, divisors, poly);
    } catch (const invalid_params &e) {
        throw parse_error(std::string("function spec: ") + e.what());
    }
}

}

#endif
