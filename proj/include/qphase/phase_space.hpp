#pragma once

#include <vector>

namespace qphase {

bool is_prime(int n);

// reduce into [0, n)
int mod_n(long v, int n);

/// An element of the N-element field, N prime. All arithmetic is exact mod N.
class FieldElement {
public:
    FieldElement(long value, int modulus);

    int value() const { return value_; }
    int modulus() const { return modulus_; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator-() const;
    bool operator==(const FieldElement& o) const = default;

    /// Multiplicative inverse; defined iff value != 0.
    FieldElement inverse() const;

private:
    int value_;
    int modulus_;
};

/// x/2 in the field. For N = 2 only x = 0 has a half.
FieldElement half(const FieldElement& x);

/// A point of the N x N toroidal phase space, a1 horizontal, a2 vertical.
class PhasePoint {
public:
    PhasePoint(FieldElement a1, FieldElement a2);
    PhasePoint(long a1, long a2, int modulus);

    const FieldElement& a1() const { return a1_; }
    const FieldElement& a2() const { return a2_; }
    int modulus() const { return a1_.modulus(); }

    PhasePoint operator+(const PhasePoint& o) const;
    PhasePoint operator-(const PhasePoint& o) const;
    PhasePoint operator-() const;
    bool operator==(const PhasePoint& o) const = default;

    // Global flattening convention: index = a1*N + a2. Every N^2-indexed
    // matrix in the toolkit (P, r, B, R) uses this layout.
    int index() const { return a1_.value() * modulus() + a2_.value(); }
    static PhasePoint from_index(int index, int modulus);

private:
    FieldElement a1_;
    FieldElement a2_;
};

/// Symplectic product <a,b> = a2*b1 - a1*b2 mod N.
FieldElement symplectic(const PhasePoint& a, const PhasePoint& b);

/// A line: the N solutions of one linear equation in (a1, a2).
struct Line {
    std::vector<PhasePoint> points;
};

/// A striation: N parallel lines partitioning the N^2 points.
struct Striation {
    std::vector<Line> lines;
};

/// The N+1 striations: vertical lines first (a1 = c), then one striation per
/// slope s in 0..N-1 (a2 = s*a1 + c). Lines are ordered by intercept c.
std::vector<Striation> enumerate_striations(int n);

}  // namespace qphase
