#ifndef SUCI_TOY_CURVE_HPP
#define SUCI_TOY_CURVE_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace suci::toy {

/// Affine point or the point at infinity on a small short-Weierstrass curve.
struct ToyPoint {
    bool infinity = true;
    std::int64_t x = 0;
    std::int64_t y = 0;

    static ToyPoint at_infinity() { return {}; }
    static ToyPoint affine(std::int64_t x, std::int64_t y) {
        return {false, x, y};
    }

    bool operator==(const ToyPoint&) const = default;
};

/// y^2 = x^3 + ax + b over F_p for a small prime p. Pedagogical only; the
/// production curves live in the ecies module.
class ToyCurve {
public:
    /// Throws on non-prime p, p <= 3, or a singular curve (4a^3+27b^2 = 0).
    ToyCurve(std::int64_t p, std::int64_t a, std::int64_t b);

    std::int64_t p() const { return p_; }
    std::int64_t a() const { return a_; }
    std::int64_t b() const { return b_; }

    bool contains(std::int64_t x, std::int64_t y) const;
    bool contains(const ToyPoint& pt) const;

    /// Exhaustive O(p^2) scan; throws TooLarge above p = 10000. The result
    /// includes the point at infinity.
    std::vector<ToyPoint> enumerate_points() const;

    ToyPoint negate(const ToyPoint& pt) const;
    ToyPoint add(const ToyPoint& lhs, const ToyPoint& rhs) const;
    ToyPoint scalar_mul(std::uint64_t k, const ToyPoint& base) const;

    /// Smallest n >= 1 with n*base = infinity.
    std::uint64_t order_of(const ToyPoint& base) const;

    /// Linear scan for the smallest k in [0, bound] with k*base == target.
    std::optional<std::uint64_t> ecdlp_brute_force(const ToyPoint& base,
                                                   const ToyPoint& target,
                                                   std::uint64_t bound) const;

private:
    std::int64_t p_;
    std::int64_t a_;
    std::int64_t b_;
};

/// The curve of the worked example: y^2 = x^3 - x over F_89.
ToyCurve example_curve_f89();

} // namespace suci::toy

#endif
