#pragma once

#include <pslat/cycles.hpp>
#include <pslat/errors.hpp>
#include <pslat/hom.hpp>
#include <pslat/qdp.hpp>
#include <pslat/signature.hpp>
#include <pslat/smith.hpp>
#include <pslat/surface.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pslat {

/// A genus-one monodromy factorization: the ordered vanishing-cycle classes
/// of a Lefschetz fibration over the disc.  Classes are stored in canonical
/// sign (a twist does not see the sign), and each must be primitive.
struct Factorization {
    std::vector<Cycle> cycles;

    explicit Factorization(std::vector<Cycle> cs) : cycles(std::move(cs)) {
        require(!cycles.empty(), "DimensionMismatch",
                "a factorization needs at least one cycle");
        for (Cycle& c : cycles) {
            require(is_primitive(c), "NotPrimitive", "vanishing cycles are primitive classes");
            c = normalize_cycle(c);
        }
    }

    std::size_t size() const { return cycles.size(); }

    friend bool operator==(const Factorization&, const Factorization&) = default;
};

/// Left-to-right product of the twist matrices, the counterclockwise
/// boundary monodromy.
inline IntMatrix total_monodromy(const Factorization& f) {
    IntMatrix m = IntMatrix::identity(2);
    for (const Cycle& c : f.cycles) m = m * dehn_matrix(c);
    return m;
}

struct HMove {
    std::size_t index = 0;
    bool forward = true;

    bool operator==(const HMove&) const = default;
};

inline HMove inverse_hmove(const HMove& m) { return HMove{m.index, !m.forward}; }

inline std::vector<HMove> inverse_hmoves(const std::vector<HMove>& moves) {
    std::vector<HMove> out(moves.rbegin(), moves.rend());
    for (HMove& m : out) m = inverse_hmove(m);
    return out;
}

/// Elementary braid move on neighbouring cycles.  Forward replaces
/// (c_i, c_{i+1}) by (M_{c_i} c_{i+1}, c_i); inverse is its two-sided
/// inverse.  The total monodromy is unchanged.
inline Factorization hurwitz_move(Factorization f, const HMove& m) {
    require(m.index + 1 < f.cycles.size(), "IndexOutOfRange",
            "Hurwitz move index exceeds the factorization");
    Cycle ci = f.cycles[m.index];
    Cycle cj = f.cycles[m.index + 1];
    if (m.forward) {
        f.cycles[m.index] = normalize_cycle(twist_class(ci, cj));
        f.cycles[m.index + 1] = ci;
    } else {
        f.cycles[m.index] = cj;
        f.cycles[m.index + 1] = normalize_cycle(untwist_class(cj, ci));
    }
    return f;
}

inline Factorization apply_hurwitz(Factorization f, const std::vector<HMove>& moves) {
    for (const HMove& m : moves) f = hurwitz_move(std::move(f), m);
    return f;
}

/// Global conjugation: transports every cycle by the same mapping class.
inline Factorization conjugate(const Factorization& f, const IntMatrix& psi) {
    require(is_sl2(psi), "NotSL2", "global conjugation needs a determinant-one matrix");
    Factorization out = f;
    for (Cycle& c : out.cycles) c = normalize_cycle(apply_sl2(psi, c));
    return out;
}

/// The pairing on thimble classes together with the map sending a thimble to
/// its vanishing cycle.  Built from the displayed formula and checked
/// against the glued-chain construction, which must agree entry by entry.
inline Hom seifert_pseudolattice(const Factorization& f) {
    std::size_t n = f.size();
    IntMatrix gram = IntMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            gram(i, j) = cycle_pairing(f.cycles[i], f.cycles[j]);
    Hom charge(Pseudolattice(gram), elliptic_curve(), cycles_to_matrix(f.cycles));
    std::vector<IntVec> vs;
    vs.reserve(n);
    for (const Cycle& c : f.cycles) vs.push_back(to_vector(c));
    Hom glued = z_of(elliptic_curve(), vs);
    require(glued.source.gram == charge.source.gram && glued.matrix == charge.matrix,
            "Internal", "the Seifert pairing disagrees with the glued chain");
    return charge;
}

/// Intersection pairing of junctions: the symmetrized Seifert form, with
/// diagonal -1.  Half-integers are exact rationals here.
inline RatMatrix junction_pairing(const Factorization& f) {
    IntMatrix gram = seifert_pseudolattice(f).source.gram;
    std::size_t n = gram.rows();
    RatMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = Rat(-(gram(i, j) + gram(j, i)), 2);
    return out;
}

struct ParabolicForm {
    Int k;
    IntMatrix basis;
};

/// Conjugates a trace-two mapping class to its shear normal form:
/// basis^{-1} M basis = [[1, k], [0, 1]], with the first basis column the
/// primitive fixed vector of M and the second its smallest completion to a
/// determinant-one frame.  The identity maps to k = 0.
inline ParabolicForm normalize_parabolic(const IntMatrix& m) {
    require(is_sl2(m), "NotSL2", "parabolic normalization needs a determinant-one matrix");
    if (m == IntMatrix::identity(2)) return ParabolicForm{0, IntMatrix::identity(2)};
    require(m(0, 0) + m(1, 1) == 2, "NotParabolic", "trace must equal two");
    IntMatrix fixed = integer_kernel(m - IntMatrix::identity(2));
    require(fixed.cols() == 1, "Internal", "a nonidentity parabolic has a line of fixed vectors");
    Int w0 = fixed(0, 0);
    Int w1 = fixed(1, 0);
    ExtGcd e = ext_gcd(w0, w1);
    require(e.g == 1, "Internal", "the fixed vector must be primitive");
    // Columns (w, u) with det = w0*(e.x) + w1*(e.y) = 1; slide u along w to
    // the smallest representative.
    Int u0 = -e.y;
    Int u1 = e.x;
    Int ww = w0 * w0 + w1 * w1;
    Int uw = u0 * w0 + u1 * w1;
    Int t0 = floor_div(uw, ww);
    Int best_t = t0;
    Int best_cost = -1;
    for (Int t = t0 - 2; t <= t0 + 2; ++t) {
        Int cost = abs_int(u0 - t * w0) + abs_int(u1 - t * w1);
        if (best_cost < 0 || cost < best_cost || (cost == best_cost && t < best_t)) {
            best_cost = cost;
            best_t = t;
        }
    }
    u0 -= best_t * w0;
    u1 -= best_t * w1;
    IntMatrix basis{{w0, u0}, {w1, u1}};
    IntMatrix normal = detail::sl2_inverse(basis) * m * basis;
    require(normal(0, 0) == 1 && normal(1, 0) == 0 && normal(1, 1) == 1, "Internal",
            "conjugation by the fixed-vector frame must give a shear");
    return ParabolicForm{normal(0, 1), std::move(basis)};
}

/// Signature of the total space glued with the ruled neighbourhood of the
/// section at infinity, by fibre count.
inline Int sigma_y(std::size_t n) {
    require(n >= 1, "Precondition", "at least one singular fibre");
    if (n < 12) return Int(5) - Int(n);
    if (n == 12) return Int(-8);
    return Int(3) - Int(n);
}

/// Meyer cocycle values on shears [[1, d], [0, 1]].
inline Rat meyer_phi_parabolic(const Int& d) {
    if (d < 0) return Rat(1) - Rat(d, 3);
    if (d == 0) return Rat(0);
    return Rat(-1) - Rat(d, 3);
}

struct LgCheck {
    bool ok = false;
    std::string reason;
    IntMatrix basis = IntMatrix::identity(2);  // (a, b) frame witnessing the conditions
};

/// Decides the two quasi Landau-Ginzburg conditions: the boundary monodromy
/// must be a shear by n - 12 in some frame, and in such a frame the adjoint
/// image of the fibre class a must be primitive.  With exactly twelve fibres
/// the monodromy must be trivial, and a valid a exists precisely when the
/// adjoint matrix has unit content; a witness frame is then built from its
/// Smith decomposition.
inline LgCheck is_quasi_lg(const Factorization& f) {
    std::size_t n = f.size();
    IntMatrix total = total_monodromy(f);
    if (n == 12) {
        if (total != IntMatrix::identity(2))
            return {false, "twelve fibres need trivial total monodromy", IntMatrix::identity(2)};
        IntMatrix r = right_adjoint(seifert_pseudolattice(f));
        Int g = 0;
        for (std::size_t i = 0; i < r.rows(); ++i)
            for (std::size_t j = 0; j < r.cols(); ++j) g = gcd_int(g, r(i, j));
        if (g != 1)
            return {false, "every fibre class has imprimitive adjoint image",
                    IntMatrix::identity(2)};
        SmithForm s = smith_form(r);
        IntVec a = s.V.col(0);
        ExtGcd e = ext_gcd(a[0], a[1]);
        require(e.g == 1, "Internal", "a Smith transform column must be primitive");
        IntMatrix basis{{a[0], -e.y}, {a[1], e.x}};
        IntMatrix conj = detail::sl2_inverse(basis);
        IntMatrix r2 = right_adjoint(seifert_pseudolattice(conjugate(f, conj)));
        require(is_primitive(r2.col(0)), "Internal",
                "the Smith-derived class must have primitive adjoint image");
        return {true, "", std::move(basis)};
    }
    ParabolicForm pf;
    try {
        pf = normalize_parabolic(total);
    } catch (const Error& e) {
        if (e.kind() == "NotParabolic")
            return {false, "total monodromy is not a shear in any frame",
                    IntMatrix::identity(2)};
        throw;
    }
    if (pf.k != Int(n) - 12)
        return {false,
                "total monodromy shears by " + to_string(pf.k) + ", expected " +
                    to_string(Int(n) - 12),
                IntMatrix::identity(2)};
    IntMatrix r = right_adjoint(seifert_pseudolattice(conjugate(f, detail::sl2_inverse(pf.basis))));
    if (!is_primitive(r.col(0)))
        return {false, "the adjoint image of the fibre class is imprimitive", pf.basis};
    return {true, "", pf.basis};
}

/// Signature of the orthogonal complement lattice of a quasi Landau-Ginzburg
/// model: must be hyperbolic of rank n - 2.
inline bool ns_signature_check(const Factorization& f) {
    LgCheck chk = is_quasi_lg(f);
    require(chk.ok, "NotQuasiLG", chk.reason);
    Factorization conj = conjugate(f, detail::sl2_inverse(chk.basis));
    Hom charge = seifert_pseudolattice(conj);
    IntVec p = right_adjoint(charge).col(0);
    Inertia sig = signature(neron_severi(charge.source, p).q_gram);
    return sig.positive == 1 && sig.negative == f.size() - 3 && sig.zero == 0;
}

struct FibrationDefect {
    Int defect;
    bool divisible;
};

/// Writes the total monodromy as a shear [[1, -d], [0, 1]] and reports the
/// defect d + n - 12 together with its divisibility by twelve.
inline FibrationDefect defect_divisibility(const Factorization& f) {
    ParabolicForm pf = normalize_parabolic(total_monodromy(f));
    Int d = -pf.k;
    Int defect = d + Int(f.size()) - 12;
    return {defect, defect % 12 == 0};
}

struct LgResult {
    ClassificationResult classification;
    std::vector<HMove> hurwitz;
    IntMatrix conjugation;
};

/// Classifies a quasi Landau-Ginzburg factorization up to Hurwitz moves and
/// global conjugation: the result's moves followed by the recorded
/// conjugation turn the input into the chain or quadric model exactly.
/// Basis sign changes on the algebraic side are invisible here, since
/// factorizations store canonical signs.
inline LgResult classify_lg(const Factorization& f, long budget = kDefaultSearchBudget) {
    LgCheck chk = is_quasi_lg(f);
    require(chk.ok, "NotQuasiLG", chk.reason);
    IntMatrix frame_inv = detail::sl2_inverse(chk.basis);
    Factorization framed = conjugate(f, frame_inv);
    QdpInstance inst = instance_from_cycles(framed.cycles);
    ClassificationResult res = classify(inst, budget);

    std::vector<HMove> moves;
    moves.reserve(res.mutation_trace.size());
    for (const Move& m : res.mutation_trace)
        moves.push_back(HMove{m.index, m.dir == MoveDir::Left});
    IntMatrix shear{{Int(1), res.base_change_k}, {Int(0), Int(1)}};
    IntMatrix conjugation = shear * frame_inv;

    Factorization replay = conjugate(apply_hurwitz(f, moves), conjugation);
    Factorization model = Factorization(
        res.form == NormalForm::Quadric ? quadric_cycles() : chain_cycles(res.n));
    require(replay == model, "ReplayMismatch",
            "the Hurwitz translation of the witness does not reproduce the model");
    return LgResult{std::move(res), std::move(moves), std::move(conjugation)};
}

}  // namespace pslat
