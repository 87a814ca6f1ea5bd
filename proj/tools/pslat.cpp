// pslat: command-line workbench over the pslat headers.
//
// Verbs: inspect, mutate, spherical, glue, classify-qdp,
//        lefschetz {total|hurwitz|conjugate|seifert|is-quasi-lg|classify-lg|sigma},
//        verify-paper.
// Exit codes: 0 success or affirmative answer, 1 mathematical negative or
// math-level error, 2 usage or parse error, 3 internal invariant breach.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pslat/json_io.hpp"
#include "pslat/surface.hpp"
#include "pslat/verification.hpp"

namespace {

using namespace pslat;

struct Opts {
    std::string input = "-";
    bool json = false;
    bool surface = false;
    int height = 16;
    long budget = kDefaultSearchBudget;
    unsigned long long seed = 20240815ULL;
    long long n = 0;
};

std::string read_all(const std::string& path) {
    std::ostringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) fail("Parse", "cannot open input file '" + path + "'");
        buf << in.rdbuf();
    }
    return buf.str();
}

Json load_json(const std::string& path) { return Json::parse(read_all(path)); }

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

// Text-mode formatting: matrices as bracketed rows, vectors as one row.

std::string vec_text(const IntVec& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += to_string(v[i]);
    }
    return s + "]";
}

std::string rat_vec_text(const RatVec& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += to_string(v[i]);
    }
    return s + "]";
}

void print_matrix(const IntMatrix& m, const std::string& indent = "  ") {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::string s = indent + "[";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) s += ", ";
            s += to_string(m(i, j));
        }
        std::cout << s << "]\n";
    }
}

void print_rat_matrix(const RatMatrix& m, const std::string& indent = "  ") {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::string s = indent + "[";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) s += ", ";
            s += to_string(m(i, j));
        }
        std::cout << s << "]\n";
    }
}

std::string moves_text(const std::vector<Move>& moves) {
    std::string s = "[";
    for (std::size_t i = 0; i < moves.size(); ++i) {
        if (i) s += ", ";
        s += (moves[i].dir == MoveDir::Left ? "L@" : "R@") + std::to_string(moves[i].index);
    }
    return s + "]";
}

std::string hmoves_text(const std::vector<HMove>& moves) {
    std::string s = "[";
    for (std::size_t i = 0; i < moves.size(); ++i) {
        if (i) s += ", ";
        s += (moves[i].forward ? "fwd@" : "inv@") + std::to_string(moves[i].index);
    }
    return s + "]";
}

std::string index_set_text(const std::set<std::size_t>& xs) {
    std::string s = "{";
    bool first = true;
    for (std::size_t x : xs) {
        if (!first) s += ", ";
        s += std::to_string(x);
        first = false;
    }
    return s + "}";
}

std::string index_list_text(const std::vector<std::size_t>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(xs[i]);
    }
    return s + "]";
}

Json rat_vec_to_json(const RatVec& v) {
    Json out = Json::array();
    for (const Rat& q : v) out.push_back(rat_to_json(q));
    return out;
}

std::vector<Cycle> raw_cycles_from_json(const Json& j) {
    const Json& arr = j.at("cycles");
    require(arr.is_array() && !arr.empty(), "Parse", "'cycles' must be a nonempty array");
    std::vector<Cycle> cs;
    for (const Json& e : arr) {
        require(e.is_array() && e.size() == 2, "Parse", "each cycle must be a pair [p, q]");
        cs.push_back(Cycle{int_from_json(e[0]), int_from_json(e[1])});
    }
    return cs;
}

void print_classification(const ClassificationResult& res) {
    std::cout << "normal form: " << to_string(res.form) << "\n";
    std::cout << "n: " << res.n << "\n";
    std::cout << "mutation trace: " << moves_text(res.mutation_trace) << "\n";
    std::cout << "sign flips: " << index_set_text(res.sign_flips) << "\n";
    std::cout << "base change k: " << to_string(res.base_change_k) << "\n";
    std::cout << "contraction order: " << index_list_text(res.contraction_order) << "\n";
}

// ---------------------------------------------------------------- inspect

int run_inspect(const Opts& o) {
    Pseudolattice L = pseudolattice_from_json(load_json(o.input));
    RatMatrix serre = serre_operator(L);
    bool unimodular = is_unimodular(L);
    std::optional<int> parity;
    if (is_cy(L, 0))
        parity = 0;
    else if (is_cy(L, 1))
        parity = 1;
    PointLikeSearch pls = find_point_like(L, o.height);

    std::optional<IntVec> point;
    std::optional<NeronSeveri> ns;
    std::optional<RatVec> k_class;
    std::optional<Rat> delta;
    if (o.surface) {
        require(!pls.points.empty(), "NotPointLike",
                "no point-like vector found within the height bound");
        point = pls.points.front();
        ns = neron_severi(L, *point);
        k_class = canonical_class(L, *point, *ns);
        delta = defect(L, *point);
    }

    if (o.json) {
        Json j;
        j["rank"] = L.rank();
        j["gram"] = matrix_to_json(L.gram);
        j["serre"] = rat_matrix_to_json(serre);
        j["unimodular"] = unimodular;
        j["cy_parity"] = parity ? Json(*parity) : Json(nullptr);
        Json pts = Json::array();
        for (const IntVec& p : pls.points) pts.push_back(vector_to_json(p));
        j["point_like"] = Json{{"points", pts}, {"exhaustive", pls.exhaustive}};
        if (o.surface) {
            j["surface"] = Json{{"point", vector_to_json(*point)},
                                {"ns_rank", ns->embedding.cols()},
                                {"ns_gram", matrix_to_json(ns->q_gram)},
                                {"canonical_class", rat_vec_to_json(*k_class)},
                                {"defect", rat_to_json(*delta)}};
        }
        emit(j);
        return 0;
    }

    std::cout << "rank: " << L.rank() << "\n";
    std::cout << "gram:\n";
    print_matrix(L.gram);
    std::cout << "serre operator:\n";
    print_rat_matrix(serre);
    std::cout << "unimodular: " << (unimodular ? "yes" : "no") << "\n";
    std::cout << "cy parity: " << (parity ? std::to_string(*parity) : std::string("none")) << "\n";
    std::cout << "point-like vectors" << (pls.exhaustive ? " (exhaustive)" : " (height-bounded)")
              << ":" << (pls.points.empty() ? " none\n" : "\n");
    for (const IntVec& p : pls.points) std::cout << "  " << vec_text(p) << "\n";
    if (o.surface) {
        std::cout << "surface data for p = " << vec_text(*point) << ":\n";
        std::cout << "ns rank: " << ns->embedding.cols() << "\n";
        std::cout << "ns gram:\n";
        print_matrix(ns->q_gram);
        std::cout << "canonical class: " << rat_vec_text(*k_class) << "\n";
        std::cout << "defect: " << to_string(*delta) << "\n";
    }
    return 0;
}

// ----------------------------------------------------------------- mutate

int run_mutate(const Opts& o) {
    Json j = load_json(o.input);
    Pseudolattice L = pseudolattice_from_json(j.at("pseudolattice"));
    IntMatrix basis = basis_from_json(j.at("basis"));
    std::vector<Move> moves = moves_from_json(j.at("moves"));
    IntMatrix out = apply_moves(L, basis, moves);
    if (j.contains("flips")) {
        std::vector<std::size_t> flips;
        for (const Json& e : j.at("flips")) {
            require(e.is_number_unsigned(), "Parse", "'flips' must hold nonnegative indices");
            flips.push_back(e.get<std::size_t>());
        }
        out = apply_flips(out, flips);
    }
    IntMatrix gram = gram_in_basis(L, out);

    if (o.json) {
        emit(Json{{"basis", basis_to_json(out)}, {"gram", matrix_to_json(gram)}});
        return 0;
    }
    std::cout << "mutated basis (columns):\n";
    print_matrix(out);
    std::cout << "gram in mutated basis:\n";
    print_matrix(gram);
    return 0;
}

// -------------------------------------------------------------- spherical

int run_spherical(const Opts& o) {
    Hom f = hom_from_json(load_json(o.input));
    RatMatrix adj = right_adjoint_rational(f);
    bool integral = is_integral(adj);
    bool spherical = is_spherical(f);
    std::optional<IntMatrix> tw, ctw;
    std::optional<int> cy_parity;
    if (integral) {
        tw = twist(f);
        ctw = cotwist(f);
        if (is_relative_cy(f, 0))
            cy_parity = 0;
        else if (is_relative_cy(f, 1))
            cy_parity = 1;
    }
    std::vector<Int> coker = cokernel_invariants(f.matrix);

    if (o.json) {
        Json j;
        j["adjoint"] = integral ? matrix_to_json(*to_integer(adj)) : Json(nullptr);
        j["adjoint_rational"] = rat_matrix_to_json(adj);
        j["spherical"] = spherical;
        j["twist"] = tw ? matrix_to_json(*tw) : Json(nullptr);
        j["cotwist"] = ctw ? matrix_to_json(*ctw) : Json(nullptr);
        j["relative_cy_parity"] = cy_parity ? Json(*cy_parity) : Json(nullptr);
        Json ck = Json::array();
        for (const Int& d : coker) ck.push_back(int_to_json(d));
        j["cokernel"] = ck;
        emit(j);
        return spherical ? 0 : 1;
    }

    std::cout << "adjoint" << (integral ? "" : " (not integral)") << ":\n";
    print_rat_matrix(adj);
    std::cout << "spherical: " << (spherical ? "yes" : "no") << "\n";
    if (tw) {
        std::cout << "twist:\n";
        print_matrix(*tw);
        std::cout << "cotwist:\n";
        print_matrix(*ctw);
    }
    std::cout << "relative cy parity: "
              << (cy_parity ? std::to_string(*cy_parity) : std::string("none")) << "\n";
    std::cout << "cokernel invariants: ";
    std::string s = "[";
    for (std::size_t i = 0; i < coker.size(); ++i) {
        if (i) s += ", ";
        s += to_string(coker[i]);
    }
    std::cout << s << "]\n";
    return spherical ? 0 : 1;
}

// ------------------------------------------------------------------- glue

int run_glue(const Opts& o) {
    Json j = load_json(o.input);
    Hom f1 = hom_from_json(j.at("first"));
    Hom f2 = hom_from_json(j.at("second"));
    Hom g = glue(f1, f2);
    if (o.json) {
        emit(hom_to_json(g));
        return 0;
    }
    std::cout << "glued source gram:\n";
    print_matrix(g.source.gram);
    std::cout << "glued matrix:\n";
    print_matrix(g.matrix);
    return 0;
}

// ----------------------------------------------------------- classify-qdp

int run_classify_qdp(const Opts& o) {
    Json j = load_json(o.input);
    QdpInstance inst = j.contains("hom") ? qdp_instance_from_json(j)
                                         : instance_from_cycles(raw_cycles_from_json(j));
    ClassificationResult res = classify(inst, o.budget);
    if (o.json) {
        emit(classification_to_json(res));
        return 0;
    }
    print_classification(res);
    return 0;
}

// -------------------------------------------------------------- lefschetz

int run_lef_total(const Opts& o) {
    Factorization f = factorization_from_json(load_json(o.input));
    IntMatrix total = total_monodromy(f);
    if (o.json) {
        emit(Json{{"total", matrix_to_json(total)}});
        return 0;
    }
    std::cout << "total monodromy:\n";
    print_matrix(total);
    return 0;
}

int run_lef_hurwitz(const Opts& o) {
    Json j = load_json(o.input);
    Factorization f = factorization_from_json(j.at("factorization"));
    std::vector<HMove> moves = hmoves_from_json(j.at("moves"));
    Factorization out = apply_hurwitz(f, moves);
    if (o.json) {
        emit(factorization_to_json(out));
        return 0;
    }
    std::cout << "factorization after " << hmoves_text(moves) << ":\n";
    for (const Cycle& c : out.cycles) std::cout << "  " << to_string(c) << "\n";
    return 0;
}

int run_lef_conjugate(const Opts& o) {
    Json j = load_json(o.input);
    Factorization f = factorization_from_json(j.at("factorization"));
    IntMatrix psi = matrix_from_json(j.at("matrix"));
    Factorization out = conjugate(f, psi);
    if (o.json) {
        emit(factorization_to_json(out));
        return 0;
    }
    std::cout << "conjugated factorization:\n";
    for (const Cycle& c : out.cycles) std::cout << "  " << to_string(c) << "\n";
    return 0;
}

int run_lef_seifert(const Opts& o) {
    Factorization f = factorization_from_json(load_json(o.input));
    Hom z = seifert_pseudolattice(f);
    if (o.json) {
        emit(hom_to_json(z));
        return 0;
    }
    std::cout << "seifert gram:\n";
    print_matrix(z.source.gram);
    std::cout << "asymptotic charge matrix:\n";
    print_matrix(z.matrix);
    return 0;
}

int run_lef_is_quasi_lg(const Opts& o) {
    Factorization f = factorization_from_json(load_json(o.input));
    LgCheck check = is_quasi_lg(f);
    if (o.json) {
        Json j;
        j["ok"] = check.ok;
        j["reason"] = check.reason;
        j["basis"] = check.ok ? basis_to_json(check.basis) : Json(nullptr);
        emit(j);
        return check.ok ? 0 : 1;
    }
    if (check.ok) {
        std::cout << "quasi-lg: yes\n";
        std::cout << "witness (a, b) basis (columns):\n";
        print_matrix(check.basis);
        return 0;
    }
    std::cout << "quasi-lg: no\n";
    std::cout << "reason: " << check.reason << "\n";
    return 1;
}

int run_lef_classify_lg(const Opts& o) {
    Factorization f = factorization_from_json(load_json(o.input));
    LgResult res = classify_lg(f, o.budget);
    if (o.json) {
        emit(lg_result_to_json(res));
        return 0;
    }
    print_classification(res.classification);
    std::cout << "hurwitz moves: " << hmoves_text(res.hurwitz) << "\n";
    std::cout << "conjugation:\n";
    print_matrix(res.conjugation);
    return 0;
}

int run_lef_sigma(const Opts& o) {
    require(o.n >= 1, "Precondition", "--n must be at least one");
    std::size_t n = static_cast<std::size_t>(o.n);
    Int s = sigma_y(n);
    if (o.json) {
        emit(Json{{"n", n}, {"sigma", int_to_json(s)}});
        return 0;
    }
    std::cout << "sigma(" << n << ") = " << to_string(s) << "\n";
    return 0;
}

// ----------------------------------------------------------- verify-paper

int run_verify(const Opts& o) {
    std::vector<CheckLine> lines = run_acceptance(o.seed, o.budget);
    bool all = true;
    for (const CheckLine& line : lines) all = all && line.pass;
    if (o.json) {
        Json checks = Json::array();
        for (const CheckLine& line : lines)
            checks.push_back(Json{{"number", line.number},
                                  {"label", line.label},
                                  {"pass", line.pass},
                                  {"detail", line.detail}});
        emit(Json{{"seed", o.seed}, {"checks", checks}, {"all_pass", all}});
        return all ? 0 : 1;
    }
    for (const CheckLine& line : lines) {
        std::printf("%2d %s: %s", line.number, line.pass ? "PASS" : "FAIL", line.label.c_str());
        if (!line.detail.empty()) std::printf(" (%s)", line.detail.c_str());
        std::printf("\n");
    }
    std::printf("%s\n", all ? "all checks passed" : "some checks FAILED");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    Opts o;
    int (*action)(const Opts&) = nullptr;

    CLI::App app{"exact pseudolattice and genus-1 Lefschetz fibration workbench"};
    app.require_subcommand(1);

    auto add_io = [&o](CLI::App* sub) {
        sub->add_option("--input", o.input, "JSON input file, or - for stdin");
        sub->add_flag("--json", o.json, "emit machine-readable JSON");
    };
    auto set = [&action](int (*fn)(const Opts&)) { return [&action, fn]() { action = fn; }; };

    CLI::App* inspect = app.add_subcommand("inspect", "report pseudolattice structure");
    add_io(inspect);
    inspect->add_flag("--surface", o.surface, "include Neron-Severi data, canonical class, defect");
    inspect->add_option("--height", o.height, "coefficient bound for point-like enumeration");
    inspect->callback(set(run_inspect));

    CLI::App* mutate = app.add_subcommand("mutate", "apply a mutation move list to a basis");
    add_io(mutate);
    mutate->callback(set(run_mutate));

    CLI::App* spherical = app.add_subcommand("spherical", "analyze a homomorphism");
    add_io(spherical);
    spherical->callback(set(run_spherical));

    CLI::App* glue_cmd = app.add_subcommand("glue", "glue two homomorphisms over a common target");
    add_io(glue_cmd);
    glue_cmd->callback(set(run_glue));

    CLI::App* cq = app.add_subcommand("classify-qdp", "classify a quasi del Pezzo instance");
    add_io(cq);
    cq->add_option("--budget", o.budget, "search node budget");
    cq->callback(set(run_classify_qdp));

    CLI::App* lef = app.add_subcommand("lefschetz", "genus-1 Lefschetz fibration operations");
    lef->require_subcommand(1);

    CLI::App* total = lef->add_subcommand("total", "total monodromy of a factorization");
    add_io(total);
    total->callback(set(run_lef_total));

    CLI::App* hur = lef->add_subcommand("hurwitz", "apply Hurwitz moves to a factorization");
    add_io(hur);
    hur->callback(set(run_lef_hurwitz));

    CLI::App* conj = lef->add_subcommand("conjugate", "conjugate a factorization globally");
    add_io(conj);
    conj->callback(set(run_lef_conjugate));

    CLI::App* filt = lef->add_subcommand("seifert", "directed lattice of the vanishing cycles");
    add_io(filt);
    filt->callback(set(run_lef_seifert));

    CLI::App* islg = lef->add_subcommand("is-quasi-lg", "test the quasi Landau-Ginzburg property");
    add_io(islg);
    islg->callback(set(run_lef_is_quasi_lg));

    CLI::App* clg = lef->add_subcommand("classify-lg", "classify a quasi-lg factorization");
    add_io(clg);
    clg->add_option("--budget", o.budget, "search node budget");
    clg->callback(set(run_lef_classify_lg));

    CLI::App* sig = lef->add_subcommand("sigma", "signature of the fibration total space");
    sig->add_option("--n", o.n, "number of singular fibres")->required();
    sig->add_flag("--json", o.json, "emit machine-readable JSON");
    sig->callback(set(run_lef_sigma));

    CLI::App* verify = app.add_subcommand("verify-paper", "replay the frozen reference suite");
    verify->add_option("--seed", o.seed, "seed for the randomized suites");
    verify->add_option("--budget", o.budget, "search node budget");
    verify->add_flag("--json", o.json, "emit machine-readable JSON");
    verify->callback(set(run_verify));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        return action(o);
    } catch (const pslat::Error& e) {
        std::cerr << e.what() << "\n";
        if (e.kind() == "Parse") return 2;
        if (e.kind() == "ReplayMismatch" || e.kind() == "Internal") return 3;
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "Parse: " << e.what() << "\n";
        return 2;
    }
}
