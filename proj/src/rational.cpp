#include "entrocausal/rational.hpp"

#include <limits>
#include <stdexcept>

namespace entrocausal {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (c < '0' || c > '9')
            return false;
    return true;
}

Integer parse_integer(std::string_view s)
{
    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        negative = s[0] == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s))
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    Integer v(std::string(s), 10);
    return negative ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t'))
        text.remove_suffix(1);
    if (text.empty())
        throw std::invalid_argument("empty rational literal");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer num = parse_integer(text.substr(0, slash));
        std::string_view den_text = text.substr(slash + 1);
        if (!all_digits(den_text))
            throw std::invalid_argument("bad denominator in '" + std::string(text) + "'");
        Integer den(std::string(den_text), 10);
        if (den == 0)
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        if (!whole.empty() && (whole[0] == '-' || whole[0] == '+'))
            whole.remove_prefix(1);
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))
            || (whole.empty() && frac.empty()))
            throw std::invalid_argument("bad decimal literal '" + std::string(text) + "'");
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        Integer num = whole.empty() ? Integer(0) : Integer(std::string(whole), 10);
        num *= scale;
        if (!frac.empty())
            num += Integer(std::string(frac), 10);
        Rational r(negative ? Integer(-num) : num, scale);
        r.canonicalize();
        return r;
    }
    return Rational(parse_integer(text));
}

std::string to_string(const Rational& value)
{
    return value.get_str();
}

bool fits_int64(const Integer& value)
{
    static const Integer lo(std::to_string(std::numeric_limits<std::int64_t>::min()));
    static const Integer hi(std::to_string(std::numeric_limits<std::int64_t>::max()));
    return value >= lo && value <= hi;
}

std::int64_t to_int64(const Integer& value)
{
    if (!fits_int64(value))
        throw std::overflow_error("integer does not fit in 64 bits");
    return std::stoll(value.get_str());
}

}  // namespace entrocausal
