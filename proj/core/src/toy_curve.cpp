#include "suci/toy_curve.hpp"

#include <string>

#include "suci/errors.hpp"

namespace suci::toy {
namespace {

constexpr std::int64_t kEnumerationGuard = 10000;

std::int64_t mod(std::int64_t v, std::int64_t p) {
    std::int64_t r = v % p;
    return r < 0 ? r + p : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t p) {
    return mod(a * b, p); // p <= 10^4 so products fit in int64
}

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t p) {
    std::int64_t result = 1;
    base = mod(base, p);
    while (exp > 0) {
        if (exp & 1)
            result = mul_mod(result, base, p);
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    return result;
}

// Fermat: a^(p-2) mod p
std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
    return pow_mod(a, p - 2, p);
}

bool is_prime(std::int64_t n) {
    if (n < 2)
        return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

} // namespace

ToyCurve::ToyCurve(std::int64_t p, std::int64_t a, std::int64_t b)
    : p_(p), a_(mod(a, p > 0 ? p : 1)), b_(mod(b, p > 0 ? p : 1)) {
    if (p <= 3 || !is_prime(p))
        throw Error("curve modulus must be a prime > 3, got " +
                    std::to_string(p));
    std::int64_t discriminant =
        mod(4 * pow_mod(a_, 3, p_) + 27 * mul_mod(b_, b_, p_), p_);
    if (discriminant == 0)
        throw Error("singular curve: 4a^3 + 27b^2 = 0 mod p");
}

bool ToyCurve::contains(std::int64_t x, std::int64_t y) const {
    std::int64_t lhs = mul_mod(y, y, p_);
    std::int64_t rhs = mod(pow_mod(x, 3, p_) + mul_mod(a_, x, p_) + b_, p_);
    return lhs == rhs;
}

bool ToyCurve::contains(const ToyPoint& pt) const {
    return pt.infinity || contains(pt.x, pt.y);
}

std::vector<ToyPoint> ToyCurve::enumerate_points() const {
    if (p_ > kEnumerationGuard)
        throw TooLarge("enumeration guard is p <= 10000, got " +
                       std::to_string(p_));
    std::vector<ToyPoint> points;
    points.push_back(ToyPoint::at_infinity());
    for (std::int64_t x = 0; x < p_; ++x)
        for (std::int64_t y = 0; y < p_; ++y)
            if (contains(x, y))
                points.push_back(ToyPoint::affine(x, y));
    return points;
}

ToyPoint ToyCurve::negate(const ToyPoint& pt) const {
    if (pt.infinity)
        return pt;
    return ToyPoint::affine(pt.x, mod(-pt.y, p_));
}

ToyPoint ToyCurve::add(const ToyPoint& lhs, const ToyPoint& rhs) const {
    if (lhs.infinity)
        return rhs;
    if (rhs.infinity)
        return lhs;
    if (lhs.x == rhs.x && mod(lhs.y + rhs.y, p_) == 0)
        return ToyPoint::at_infinity(); // vertical line
    std::int64_t slope;
    if (lhs.x == rhs.x && lhs.y == rhs.y) {
        // tangent: (3x^2 + a) / 2y
        std::int64_t num = mod(3 * mul_mod(lhs.x, lhs.x, p_) + a_, p_);
        slope = mul_mod(num, inv_mod(mod(2 * lhs.y, p_), p_), p_);
    } else {
        // chord: (y2 - y1) / (x2 - x1)
        std::int64_t num = mod(rhs.y - lhs.y, p_);
        slope = mul_mod(num, inv_mod(mod(rhs.x - lhs.x, p_), p_), p_);
    }
    std::int64_t x3 = mod(mul_mod(slope, slope, p_) - lhs.x - rhs.x, p_);
    std::int64_t y3 = mod(mul_mod(slope, mod(lhs.x - x3, p_), p_) - lhs.y, p_);
    return ToyPoint::affine(x3, y3);
}

ToyPoint ToyCurve::scalar_mul(std::uint64_t k, const ToyPoint& base) const {
    ToyPoint result = ToyPoint::at_infinity();
    ToyPoint addend = base;
    while (k > 0) {
        if (k & 1)
            result = add(result, addend);
        addend = add(addend, addend);
        k >>= 1;
    }
    return result;
}

std::uint64_t ToyCurve::order_of(const ToyPoint& base) const {
    ToyPoint current = base;
    std::uint64_t n = 1;
    while (!current.infinity) {
        current = add(current, base);
        ++n;
    }
    return n;
}

std::optional<std::uint64_t> ToyCurve::ecdlp_brute_force(
    const ToyPoint& base, const ToyPoint& target, std::uint64_t bound) const {
    ToyPoint current = ToyPoint::at_infinity();
    for (std::uint64_t k = 0; k <= bound; ++k) {
        if (current == target)
            return k;
        current = add(current, base);
    }
    return std::nullopt;
}

ToyCurve example_curve_f89() { return ToyCurve(89, -1, 0); }

} // namespace suci::toy
