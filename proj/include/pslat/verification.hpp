#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <pslat/hom.hpp>
#include <pslat/lefschetz.hpp>
#include <pslat/pseudolattice.hpp>
#include <pslat/qdp.hpp>
#include <pslat/smith.hpp>
#include <pslat/surface.hpp>

namespace pslat {

/// One line of the acceptance report.
struct CheckLine {
    int number = 0;
    std::string label;
    bool pass = false;
    std::string detail;
};

namespace detail {

/// Random Hurwitz walk with an entry bound: unconstrained walks compound
/// twists doubly exponentially, so a move that carries some coordinate past
/// the bound is redrawn.  Every accepted move is still uniformly drawn, and
/// the walk is deterministic for a fixed generator state.
inline Factorization scramble(std::mt19937_64& rng, Factorization f, std::size_t count) {
    const Int bound = 1000000;
    std::uniform_int_distribution<std::size_t> pos(0, f.size() - 2);
    for (std::size_t i = 0; i < count; ++i) {
        for (int attempt = 0;; ++attempt) {
            HMove m{pos(rng), rng() % 2 == 0};
            Factorization next = hurwitz_move(f, m);
            Int big = 0;
            for (const Cycle& c : next.cycles) {
                if (abs_int(c.p) > big) big = abs_int(c.p);
                if (abs_int(c.q) > big) big = abs_int(c.q);
            }
            if (big <= bound || attempt >= 20) {
                f = std::move(next);
                break;
            }
        }
    }
    return f;
}

/// Random conjugator with all entries bounded by ten, built from short twist
/// words with rejection.
inline IntMatrix bounded_sl2(std::mt19937_64& rng) {
    for (;;) {
        IntMatrix m = IntMatrix::identity(2);
        std::size_t len = rng() % 5;
        for (std::size_t i = 0; i < len; ++i)
            m = m * dehn_matrix(rng() % 2 == 0 ? Cycle{1, 0} : Cycle{0, 1});
        if (rng() % 2 == 0) m = -m;
        bool small = true;
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c)
                if (abs_int(m(r, c)) > 10) small = false;
        if (small) return m;
    }
}

inline std::vector<Move> random_basis_moves(std::mt19937_64& rng, std::size_t rank,
                                            std::size_t count) {
    std::vector<Move> moves;
    std::uniform_int_distribution<std::size_t> pos(0, rank - 2);
    for (std::size_t i = 0; i < count; ++i)
        moves.push_back(Move{pos(rng), rng() % 2 == 0 ? MoveDir::Left : MoveDir::Right});
    return moves;
}

inline IntVec random_vector(std::mt19937_64& rng, std::size_t n) {
    IntVec v(n);
    for (Int& a : v) a = Int(rng() % 21) - 10;
    return v;
}

template <class Fn>
inline CheckLine run_check(int number, const std::string& label, Fn&& body) {
    CheckLine line{number, label, false, ""};
    try {
        std::string detail;
        line.pass = body(detail);
        line.detail = detail;
    } catch (const Error& e) {
        line.pass = false;
        line.detail = e.what();
    }
    return line;
}

}  // namespace detail

/// Runs the complete acceptance suite.  Deterministic for a fixed seed; no
/// item needs more than the default search budget.
inline std::vector<CheckLine> run_acceptance(std::uint64_t seed = 20240815,
                                             long budget = kDefaultSearchBudget) {
    std::vector<CheckLine> lines;

    lines.push_back(detail::run_check(1, "adjoint and twist regression", [](std::string&) {
        Hom f3 = chain_model(3).f;
        Hom f4 = quadric_model().f;
        bool ok = right_adjoint(f3) == IntMatrix{{1, -9}, {-2, 15}, {1, -6}};
        ok = ok && right_adjoint(f4) == IntMatrix{{1, -8}, {-1, 6}, {-1, 6}, {1, -4}};
        ok = ok && twist(f3) == IntMatrix{{1, -9}, {0, 1}};
        ok = ok && twist(f4) == IntMatrix{{1, -8}, {0, 1}};
        return ok;
    }));

    lines.push_back(detail::run_check(2, "total monodromy products", [](std::string&) {
        for (std::size_t n = 3; n <= 20; ++n) {
            IntMatrix expected{{Int(1), Int(n) - 12}, {Int(0), Int(1)}};
            if (total_monodromy(Factorization(chain_cycles(n))) != expected) return false;
        }
        return total_monodromy(Factorization(quadric_cycles())) ==
               IntMatrix{{1, -8}, {0, 1}};
    }));

    lines.push_back(detail::run_check(3, "rank-five conversion word", [](std::string& why) {
        // the five moves, rightmost factor first, with the sign changes the
        // replay records on the way
        std::vector<Cycle> tail = chain_cycles(5);
        QdpInstance chain = instance_from_cycles(tail);
        std::vector<Move> word = {{2, MoveDir::Right},
                                  {3, MoveDir::Right},
                                  {1, MoveDir::Left},
                                  {2, MoveDir::Left},
                                  {3, MoveDir::Right}};
        IntMatrix basis = apply_moves(chain.f.source, chain.e_basis, word);
        basis = apply_flips(basis, std::vector<std::size_t>{1, 2, 4});

        std::vector<Cycle> qc = quadric_cycles();
        qc.push_back(Cycle{1, 0});
        QdpInstance quad = instance_from_cycles(qc);
        bool gram_ok = gram_in_basis(chain.f.source, basis) == quad.f.source.gram;
        bool hom_ok = chain.f.matrix * basis == quad.f.matrix;
        if (!gram_ok) why = "Gram matrices differ";
        if (!hom_ok) why = "hom matrices differ";
        return gram_ok && hom_ok;
    }));

    lines.push_back(detail::run_check(4, "classification round trips", [&](std::string& why) {
        std::mt19937_64 rng(seed);
        for (int i = 0; i < 100; ++i) {
            int slot = i % 9;
            Factorization model = slot == 8 ? Factorization(quadric_cycles())
                                            : Factorization(chain_cycles(3 + slot));
            NormalForm expected = slot == 8 ? NormalForm::Quadric : NormalForm::P2Chain;
            Factorization scrambled =
                conjugate(detail::scramble(rng, model, 25), detail::bounded_sl2(rng));
            LgResult res = classify_lg(scrambled, budget);
            bool ok = res.classification.form == expected &&
                      res.classification.n == model.size();
            Factorization replay =
                conjugate(apply_hurwitz(scrambled, res.hurwitz), res.conjugation);
            ok = ok && replay == model;
            if (!ok) {
                std::ostringstream msg;
                msg << "instance " << i << " failed its round trip";
                why = msg.str();
                return false;
            }
        }
        return true;
    }));

    lines.push_back(detail::run_check(5, "rank-four dichotomy", [&](std::string&) {
        ClassificationResult chain = classify(chain_model(4), budget);
        ClassificationResult quad = classify(quadric_model(), budget);
        bool ok = chain.form == NormalForm::P2Chain && quad.form == NormalForm::Quadric;
        ok = ok && cokernel_invariants(chain_model(4).f.matrix) == IntVec{};
        ok = ok && cokernel_invariants(quadric_model().f.matrix) == IntVec{2};
        return ok;
    }));

    lines.push_back(detail::run_check(6, "defect and twist corollary", [&](std::string& why) {
        std::mt19937_64 rng(seed + 6);
        for (int slot = 0; slot < 9; ++slot) {
            Factorization model = slot == 8 ? Factorization(quadric_cycles())
                                            : Factorization(chain_cycles(3 + slot));
            Factorization scrambled =
                conjugate(detail::scramble(rng, model, 10), detail::bounded_sl2(rng));
            LgResult res = classify_lg(scrambled, budget);
            Factorization witness =
                conjugate(apply_hurwitz(scrambled, res.hurwitz), res.conjugation);
            std::size_t n = witness.size();
            IntMatrix expected{{Int(1), Int(n) - 12}, {Int(0), Int(1)}};
            if (total_monodromy(witness) != expected) {
                why = "the witness twist is not the expected shear";
                return false;
            }
            Hom z = seifert_pseudolattice(witness);
            IntVec p = right_adjoint(z).col(0);
            if (defect(z.source, p) != 0) {
                why = "a classified instance has nonzero defect";
                return false;
            }
            FibrationDefect fd = defect_divisibility(scrambled);
            if (fd.defect != 0 || !fd.divisible) {
                why = "defect bookkeeping failed on the scramble";
                return false;
            }
        }
        return true;
    }));

    lines.push_back(detail::run_check(7, "signature suite", [](std::string&) {
        for (std::size_t n = 3; n <= 16; ++n)
            if (!ns_signature_check(Factorization(chain_cycles(n)))) return false;
        if (!ns_signature_check(Factorization(quadric_cycles()))) return false;
        for (std::size_t n = 3; n <= 20; ++n)
            if (Rat(sigma_y(n)) != meyer_phi_parabolic(Int(n) - 12) - Rat(2 * Int(n), 3))
                return false;
        return true;
    }));

    lines.push_back(detail::run_check(8, "randomized property suites", [&](std::string& why) {
        std::mt19937_64 rng(seed + 8);
        Pseudolattice g5 = chain_model(5).f.source;
        Pseudolattice g4 = quadric_model().f.source;

        // mutation invertibility and exceptionality preservation
        for (int i = 0; i < 1000; ++i) {
            const Pseudolattice& g = i % 2 == 0 ? g5 : g4;
            IntMatrix basis = apply_moves(g, IntMatrix::identity(g.rank()),
                                          detail::random_basis_moves(rng, g.rank(), 6));
            Move m{rng() % (g.rank() - 1), rng() % 2 == 0 ? MoveDir::Left : MoveDir::Right};
            IntMatrix once = mutate_basis(g, basis, m);
            if (apply_moves(g, once, {inverse_move(m)}) != basis) {
                why = "a mutation failed to invert";
                return false;
            }
            if (!is_exceptional_sequence(g, once)) {
                why = "a mutation left the exceptional class";
                return false;
            }
        }

        // adjunction identity over random vectors
        Hom f5 = chain_model(5).f;
        IntMatrix r5 = right_adjoint(f5);
        for (int i = 0; i < 1000; ++i) {
            IntVec u = detail::random_vector(rng, 5);
            IntVec v = detail::random_vector(rng, 2);
            if (f5.target.pair(f5.matrix.apply(u), v) != f5.source.pair(u, r5.apply(v))) {
                why = "the adjunction identity failed";
                return false;
            }
        }

        // the glued-chain pairing identity
        for (int i = 0; i < 1000; ++i) {
            std::size_t n = 3 + rng() % 4;
            Factorization f = detail::scramble(rng, Factorization(chain_cycles(n)), 5);
            Hom z = seifert_pseudolattice(f);
            IntVec u = detail::random_vector(rng, n);
            IntVec v = detail::random_vector(rng, n);
            Int lhs = z.target.pair(z.matrix.apply(u), z.matrix.apply(v));
            if (lhs != z.source.pair(u, v) - z.source.pair(v, u)) {
                why = "the image-pairing identity failed";
                return false;
            }
        }

        // twist multiplicativity under gluing
        for (int i = 0; i < 1000; ++i) {
            std::size_t n = 3 + rng() % 3;
            Factorization f = detail::scramble(rng, Factorization(chain_cycles(n)), 4);
            Hom z = seifert_pseudolattice(f);
            Hom tail = z_of_vector(z.target, to_vector(Cycle{1, 0}));
            Hom glued = glue(z, tail);
            if (twist(glued) != twist(z) * twist(tail)) {
                why = "twists are not multiplicative under gluing";
                return false;
            }
        }

        // Hurwitz moves: invariant total, congruent Seifert Gram
        for (int i = 0; i < 1000; ++i) {
            std::size_t n = 4 + rng() % 4;
            Factorization f = detail::scramble(rng, Factorization(chain_cycles(n)), 4);
            HMove hm{rng() % (n - 1), rng() % 2 == 0};
            Factorization g = hurwitz_move(f, hm);
            if (total_monodromy(g) != total_monodromy(f)) {
                why = "a Hurwitz move changed the total monodromy";
                return false;
            }
            Hom zf = seifert_pseudolattice(f);
            Move bm{hm.index, hm.forward ? MoveDir::Left : MoveDir::Right};
            IntMatrix moved = mutate_basis(zf.source, IntMatrix::identity(n), bm);
            IntMatrix congruent = gram_in_basis(zf.source, moved);
            IntMatrix flipped = seifert_pseudolattice(g).source.gram;
            // the factorization normalizes signs, so compare through the
            // sign-change congruence as well
            std::vector<std::size_t> flips;
            std::vector<Cycle> raw = cycles_from_matrix(zf.matrix * moved);
            for (std::size_t c = 0; c < raw.size(); ++c)
                if (!is_normalized(raw[c])) flips.push_back(c);
            if (gram_in_basis(zf.source, apply_flips(moved, flips)) != flipped) {
                why = "a Hurwitz move broke the Seifert congruence";
                return false;
            }
        }

        // the Serre operator fixes the point-like class
        for (int i = 0; i < 1000; ++i) {
            std::size_t n = 3 + rng() % 5;
            IntMatrix basis =
                apply_moves(chain_model(n).f.source, IntMatrix::identity(n),
                            detail::random_basis_moves(rng, n, 4));
            Pseudolattice g(gram_in_basis(chain_model(n).f.source, basis));
            Hom z(g, elliptic_curve(), chain_model(n).f.matrix * basis);
            IntVec p = right_adjoint(z).col(0);
            RatVec pr(p.size());
            for (std::size_t c = 0; c < p.size(); ++c) pr[c] = Rat(p[c]);
            if (serre_operator(g).apply(pr) != pr) {
                why = "the Serre operator moved the point-like class";
                return false;
            }
        }
        return true;
    }));

    lines.push_back(detail::run_check(9, "Markov walks descend", [&](std::string& why) {
        std::mt19937_64 rng(seed + 9);
        for (int i = 0; i < 50; ++i) {
            MarkovTriple t{3, 6, 3};
            std::size_t len = 1 + rng() % 12;
            for (std::size_t s = 0; s < len; ++s) {
                int c = static_cast<int>(rng() % 3);
                MarkovTriple up = c == 0   ? MarkovTriple{t.y * t.z - t.x, t.y, t.z}
                                  : c == 1 ? MarkovTriple{t.x, t.x * t.z - t.y, t.z}
                                           : MarkovTriple{t.x, t.y, t.x * t.y - t.z};
                if (up.x + up.y + up.z > t.x + t.y + t.z) t = up;
            }
            MarkovDescent d = markov_descent(t);
            if (!(d.terminal == MarkovTriple{3, 6, 3})) {
                why = "a walk failed to descend";
                return false;
            }
        }
        return true;
    }));

    lines.push_back(detail::run_check(10, "large fibre counts", [&](std::string& why) {
        std::mt19937_64 rng(seed + 10);
        for (std::size_t n = 13; n <= 16; ++n) {
            Factorization model(chain_cycles(n));
            Factorization scrambled =
                conjugate(detail::scramble(rng, model, 25), detail::bounded_sl2(rng));
            LgResult res = classify_lg(scrambled, budget);
            if (res.classification.form != NormalForm::P2Chain ||
                res.classification.n != n) {
                std::ostringstream msg;
                msg << "the chain with " << n << " fibres was not recovered";
                why = msg.str();
                return false;
            }
        }
        return true;
    }));

    return lines;
}

}  // namespace pslat
