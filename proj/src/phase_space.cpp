#include "qphase/phase_space.hpp"

#include <stdexcept>
#include <string>

namespace qphase {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

int mod_n(long v, int n) {
    long m = v % n;
    if (m < 0) m += n;
    return static_cast<int>(m);
}

FieldElement::FieldElement(long value, int modulus) : modulus_(modulus) {
    if (!is_prime(modulus)) {
        throw std::invalid_argument("field modulus " + std::to_string(modulus) +
                                    " is not prime");
    }
    value_ = mod_n(value, modulus);
}

namespace {
void require_same_modulus(int a, int b) {
    if (a != b) {
        throw std::invalid_argument("modulus mismatch: " + std::to_string(a) +
                                    " vs " + std::to_string(b));
    }
}
}  // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const {
    require_same_modulus(modulus_, o.modulus_);
    return {static_cast<long>(value_) + o.value_, modulus_};
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    require_same_modulus(modulus_, o.modulus_);
    return {static_cast<long>(value_) - o.value_, modulus_};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    require_same_modulus(modulus_, o.modulus_);
    return {static_cast<long>(value_) * o.value_, modulus_};
}

FieldElement FieldElement::operator-() const { return {-static_cast<long>(value_), modulus_}; }

FieldElement FieldElement::inverse() const {
    if (value_ == 0) {
        throw std::domain_error("0 has no inverse mod " + std::to_string(modulus_));
    }
    // Fermat: x^(N-2) is the inverse for prime N.
    long result = 1;
    long base = value_;
    int e = modulus_ - 2;
    while (e > 0) {
        if (e & 1) result = (result * base) % modulus_;
        base = (base * base) % modulus_;
        e >>= 1;
    }
    return {result, modulus_};
}

FieldElement half(const FieldElement& x) {
    if (x.modulus() == 2) {
        if (x.value() != 0) throw std::domain_error("no half in GF(2)");
        return x;
    }
    return x * FieldElement(2, x.modulus()).inverse();
}

PhasePoint::PhasePoint(FieldElement a1, FieldElement a2) : a1_(a1), a2_(a2) {
    require_same_modulus(a1.modulus(), a2.modulus());
}

PhasePoint::PhasePoint(long a1, long a2, int modulus)
    : a1_(a1, modulus), a2_(a2, modulus) {}

PhasePoint PhasePoint::operator+(const PhasePoint& o) const {
    return {a1_ + o.a1_, a2_ + o.a2_};
}

PhasePoint PhasePoint::operator-(const PhasePoint& o) const {
    return {a1_ - o.a1_, a2_ - o.a2_};
}

PhasePoint PhasePoint::operator-() const { return {-a1_, -a2_}; }

PhasePoint PhasePoint::from_index(int index, int modulus) {
    if (index < 0 || index >= modulus * modulus) {
        throw std::out_of_range("phase point index " + std::to_string(index) +
                                " outside [0, " + std::to_string(modulus * modulus) + ")");
    }
    return {index / modulus, index % modulus, modulus};
}

FieldElement symplectic(const PhasePoint& a, const PhasePoint& b) {
    require_same_modulus(a.modulus(), b.modulus());
    return a.a2() * b.a1() - a.a1() * b.a2();
}

std::vector<Striation> enumerate_striations(int n) {
    if (!is_prime(n)) {
        throw std::invalid_argument("striations need a prime dimension, got " +
                                    std::to_string(n));
    }
    std::vector<Striation> striations;
    striations.reserve(n + 1);

    // vertical lines a1 = c
    {
        Striation vertical;
        for (int c = 0; c < n; ++c) {
            Line line;
            for (int a2 = 0; a2 < n; ++a2) line.points.emplace_back(c, a2, n);
            vertical.lines.push_back(std::move(line));
        }
        striations.push_back(std::move(vertical));
    }

    // a2 = s*a1 + c for each slope s
    for (int s = 0; s < n; ++s) {
        Striation striation;
        for (int c = 0; c < n; ++c) {
            Line line;
            for (int a1 = 0; a1 < n; ++a1) {
                line.points.emplace_back(a1, mod_n(static_cast<long>(s) * a1 + c, n), n);
            }
            striation.lines.push_back(std::move(line));
        }
        striations.push_back(std::move(striation));
    }
    return striations;
}

}  // namespace qphase
