#pragma once

#include <pslat/errors.hpp>
#include <pslat/integer.hpp>
#include <pslat/matrix.hpp>

#include <vector>

namespace pslat {

// A homology class p*a + q*b on the torus fibre, stored as the coordinate
// pair (p, q) in the standard (a, b) frame.  The skew pairing below matches
// the elliptic curve pseudolattice, so <a, b> = -1 and <b, a> = 1.
struct Cycle {
    Int p;
    Int q;

    friend bool operator==(const Cycle& lhs, const Cycle& rhs) = default;
};

inline IntVec to_vector(const Cycle& c) { return {c.p, c.q}; }

inline Cycle cycle_from_vector(const IntVec& v) {
    require(v.size() == 2, "DimensionMismatch", "a cycle has exactly two coordinates");
    return Cycle{v[0], v[1]};
}

inline bool is_primitive(const Cycle& c) { return gcd_int(c.p, c.q) == 1; }

// Skew pairing <c1, c2> = q1 p2 - p1 q2, the elliptic curve form in (a, b)
// coordinates.
inline Int cycle_pairing(const Cycle& c1, const Cycle& c2) { return c1.q * c2.p - c1.p * c2.q; }

// Canonical sign representative: q > 0, or q = 0 and p > 0.  A Dehn twist
// only sees the class up to sign, so factorizations store this form.
inline bool is_normalized(const Cycle& c) { return c.q > 0 || (c.q == 0 && c.p > 0); }

inline Cycle normalize_cycle(const Cycle& c) {
    require(c.p != 0 || c.q != 0, "NotPrimitive", "the zero class has no sign normalization");
    if (is_normalized(c)) return c;
    return Cycle{-c.p, -c.q};
}

inline bool is_sl2(const IntMatrix& m) {
    return m.rows() == 2 && m.cols() == 2 && m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) == 1;
}

inline Cycle apply_sl2(const IntMatrix& m, const Cycle& c) {
    require(is_sl2(m), "NotSL2", "cycle transport needs a determinant-one 2x2 matrix");
    return Cycle{m(0, 0) * c.p + m(0, 1) * c.q, m(1, 0) * c.p + m(1, 1) * c.q};
}

// Matrix of the Dehn twist about the class (p, q) acting on fibre homology.
inline IntMatrix dehn_matrix(const Cycle& c) {
    require(is_primitive(c), "NotPrimitive", "Dehn twists are taken about primitive classes");
    return IntMatrix{{1 - c.p * c.q, c.p * c.p}, {-c.q * c.q, 1 + c.p * c.q}};
}

// Twist action on classes: M_v(w) = w - <v, w> v.  Agrees with dehn_matrix
// as a linear map and is how Hurwitz moves transform neighbouring cycles.
inline Cycle twist_class(const Cycle& v, const Cycle& w) {
    Int t = cycle_pairing(v, w);
    return Cycle{w.p - t * v.p, w.q - t * v.q};
}

// Inverse twist: M_v^{-1}(w) = w + <v, w> v.
inline Cycle untwist_class(const Cycle& v, const Cycle& w) {
    Int t = cycle_pairing(v, w);
    return Cycle{w.p + t * v.p, w.q + t * v.q};
}

inline IntMatrix cycles_to_matrix(const std::vector<Cycle>& cs) {
    IntMatrix m(2, cs.size());
    for (std::size_t j = 0; j < cs.size(); ++j) {
        m(0, j) = cs[j].p;
        m(1, j) = cs[j].q;
    }
    return m;
}

inline std::vector<Cycle> cycles_from_matrix(const IntMatrix& m) {
    require(m.rows() == 2, "DimensionMismatch", "a cycle matrix has two rows");
    std::vector<Cycle> out;
    out.reserve(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(Cycle{m(0, j), m(1, j)});
    return out;
}

inline std::string to_string(const Cycle& c) {
    return "(" + to_string(c.p) + "," + to_string(c.q) + ")";
}

}  // namespace pslat
