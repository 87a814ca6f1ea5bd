#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include <pslat/cycles.hpp>
#include <pslat/errors.hpp>
#include <pslat/hom.hpp>
#include <pslat/lefschetz.hpp>
#include <pslat/pseudolattice.hpp>
#include <pslat/qdp.hpp>

namespace pslat {

using Json = nlohmann::json;

/// Integers are emitted as JSON numbers while they fit in 64 bits and as
/// decimal strings beyond that, so arbitrary precision survives the wire.
inline Json int_to_json(const Int& a) {
    static const Int lo = std::numeric_limits<std::int64_t>::min();
    static const Int hi = std::numeric_limits<std::int64_t>::max();
    if (a >= lo && a <= hi) return Json(static_cast<std::int64_t>(a));
    return Json(to_string(a));
}

inline Int int_from_json(const Json& j) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_string()) return parse_int(j.get<std::string>());
    fail("Parse", "expected an integer or a decimal string");
}

inline Json matrix_to_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline IntMatrix matrix_from_json(const Json& j) {
    require(j.is_array() && !j.empty(), "Parse", "expected a nonempty array of rows");
    std::size_t cols = 0;
    for (const Json& row : j) {
        require(row.is_array(), "Parse", "expected each matrix row to be an array");
        if (cols == 0) cols = row.size();
        require(row.size() == cols && cols > 0, "Parse", "ragged or empty matrix rows");
    }
    IntMatrix m(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i)
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = int_from_json(j[i][c]);
    return m;
}

inline Json rat_to_json(const Rat& q) { return Json(to_string(q)); }

inline Json rat_matrix_to_json(const RatMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rat_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json vector_to_json(const IntVec& v) {
    Json out = Json::array();
    for (const Int& a : v) out.push_back(int_to_json(a));
    return out;
}

inline Json pseudolattice_to_json(const Pseudolattice& g) {
    return Json{{"gram", matrix_to_json(g.gram)}};
}

inline Pseudolattice pseudolattice_from_json(const Json& j) {
    require(j.is_object() && j.contains("gram"), "Parse",
            "a pseudolattice needs a \"gram\" key");
    return Pseudolattice(matrix_from_json(j["gram"]));
}

/// A basis is a list of column vectors.
inline Json basis_to_json(const IntMatrix& basis) {
    Json cols = Json::array();
    for (std::size_t c = 0; c < basis.cols(); ++c) {
        Json col = Json::array();
        for (std::size_t r = 0; r < basis.rows(); ++r) col.push_back(int_to_json(basis(r, c)));
        cols.push_back(std::move(col));
    }
    return Json{{"columns", cols}};
}

inline IntMatrix basis_from_json(const Json& j) {
    require(j.is_object() && j.contains("columns"), "Parse",
            "a basis needs a \"columns\" key");
    const Json& cols = j["columns"];
    require(cols.is_array() && !cols.empty(), "Parse", "expected a nonempty column list");
    std::size_t rows = 0;
    for (const Json& col : cols) {
        require(col.is_array(), "Parse", "expected each column to be an array");
        if (rows == 0) rows = col.size();
        require(col.size() == rows && rows > 0, "Parse", "ragged or empty basis columns");
    }
    IntMatrix m(rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = int_from_json(cols[c][r]);
    return m;
}

inline Json hom_to_json(const Hom& f) {
    return Json{{"source", pseudolattice_to_json(f.source)},
                {"target", pseudolattice_to_json(f.target)},
                {"matrix", matrix_to_json(f.matrix)}};
}

inline Hom hom_from_json(const Json& j) {
    require(j.is_object() && j.contains("source") && j.contains("target") &&
                j.contains("matrix"),
            "Parse", "a homomorphism needs \"source\", \"target\" and \"matrix\" keys");
    return Hom(pseudolattice_from_json(j["source"]), pseudolattice_from_json(j["target"]),
               matrix_from_json(j["matrix"]));
}

/// An instance is a hom plus optional bases, defaulting to the identity and
/// the standard curve frame.
inline Json qdp_instance_to_json(const QdpInstance& inst) {
    return Json{{"hom", hom_to_json(inst.f)},
                {"e_basis", basis_to_json(inst.e_basis)},
                {"ab_basis", basis_to_json(inst.ab_basis)}};
}

inline QdpInstance qdp_instance_from_json(const Json& j) {
    require(j.is_object() && j.contains("hom"), "Parse", "an instance needs a \"hom\" key");
    Hom f = hom_from_json(j["hom"]);
    IntMatrix e =
        j.contains("e_basis") ? basis_from_json(j["e_basis"]) : IntMatrix::identity(f.source.rank());
    IntMatrix ab =
        j.contains("ab_basis") ? basis_from_json(j["ab_basis"]) : IntMatrix::identity(2);
    return QdpInstance(std::move(f), std::move(e), std::move(ab));
}

inline Json factorization_to_json(const Factorization& f) {
    Json cycles = Json::array();
    for (const Cycle& c : f.cycles)
        cycles.push_back(Json::array({int_to_json(c.p), int_to_json(c.q)}));
    return Json{{"cycles", cycles}};
}

inline Factorization factorization_from_json(const Json& j) {
    require(j.is_object() && j.contains("cycles"), "Parse",
            "a factorization needs a \"cycles\" key");
    const Json& cs = j["cycles"];
    require(cs.is_array(), "Parse", "expected an array of [p, q] pairs");
    std::vector<Cycle> cycles;
    cycles.reserve(cs.size());
    for (const Json& c : cs) {
        require(c.is_array() && c.size() == 2, "Parse", "each cycle is a [p, q] pair");
        cycles.push_back(Cycle{int_from_json(c[0]), int_from_json(c[1])});
    }
    return Factorization(std::move(cycles));
}

inline Json moves_to_json(const std::vector<Move>& moves) {
    Json out = Json::array();
    for (const Move& m : moves)
        out.push_back(Json{{"index", m.index}, {"dir", m.dir == MoveDir::Left ? "L" : "R"}});
    return out;
}

inline std::vector<Move> moves_from_json(const Json& j) {
    require(j.is_array(), "Parse", "expected an array of moves");
    std::vector<Move> moves;
    moves.reserve(j.size());
    for (const Json& m : j) {
        require(m.is_object() && m.contains("index") && m.contains("dir"), "Parse",
                "each move needs \"index\" and \"dir\" keys");
        require(m["index"].is_number_unsigned(), "Parse", "move index must be nonnegative");
        std::string dir = m["dir"].get<std::string>();
        require(dir == "L" || dir == "R", "Parse", "move direction must be \"L\" or \"R\"");
        moves.push_back(Move{m["index"].get<std::size_t>(),
                             dir == "L" ? MoveDir::Left : MoveDir::Right});
    }
    return moves;
}

inline Json hmoves_to_json(const std::vector<HMove>& moves) {
    Json out = Json::array();
    for (const HMove& m : moves)
        out.push_back(Json{{"index", m.index}, {"dir", m.forward ? "fwd" : "inv"}});
    return out;
}

inline std::vector<HMove> hmoves_from_json(const Json& j) {
    require(j.is_array(), "Parse", "expected an array of Hurwitz moves");
    std::vector<HMove> moves;
    moves.reserve(j.size());
    for (const Json& m : j) {
        require(m.is_object() && m.contains("index") && m.contains("dir"), "Parse",
                "each move needs \"index\" and \"dir\" keys");
        require(m["index"].is_number_unsigned(), "Parse", "move index must be nonnegative");
        std::string dir = m["dir"].get<std::string>();
        require(dir == "fwd" || dir == "inv", "Parse",
                "move direction must be \"fwd\" or \"inv\"");
        moves.push_back(HMove{m["index"].get<std::size_t>(), dir == "fwd"});
    }
    return moves;
}

inline Json classification_to_json(const ClassificationResult& res) {
    Json flips = Json::array();
    for (std::size_t i : res.sign_flips) flips.push_back(i);
    Json order = Json::array();
    for (std::size_t i : res.contraction_order) order.push_back(i);
    return Json{{"normal_form", to_string(res.form)},
                {"n", res.n},
                {"mutation_trace", moves_to_json(res.mutation_trace)},
                {"sign_flips", flips},
                {"base_change_k", int_to_json(res.base_change_k)},
                {"contraction_order", order}};
}

inline Json lg_result_to_json(const LgResult& res) {
    return Json{{"classification", classification_to_json(res.classification)},
                {"hurwitz_moves", hmoves_to_json(res.hurwitz)},
                {"conjugation", matrix_to_json(res.conjugation)}};
}

}  // namespace pslat
