#pragma once

#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "serimat/diagonalize.hpp"
#include "serimat/discriminants.hpp"
#include "serimat/svd.hpp"

namespace serimat {

using json = nlohmann::json;

// Strict schema: unknown fields are rejected everywhere.
inline void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                       const std::string& where) {
    if (!obj.is_object()) throw SchemaError(where + ": expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (ok.count(it.key()) == 0)
            throw SchemaError(where + ": unknown field \"" + it.key() + "\"");
}

inline std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

inline mpq_class rational_from_string(const std::string& s) {
    mpq_class q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw ParseError("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

// ---------------------------------------------------------------------------
// Scalars. Exact: the four components of (a + b sqrt2) + (c + d sqrt2) i as
// "p/q" strings, zero fields omitted. Float: decimal strings.
// ---------------------------------------------------------------------------
inline json scalar_to_json(const ExactScalar& s) {
    json j = json::object();
    j["re"] = rational_to_string(s.re().rat());
    if (s.re().rat_sqrt2() != 0) j["re_sqrt2"] = rational_to_string(s.re().rat_sqrt2());
    if (s.im().rat() != 0) j["im"] = rational_to_string(s.im().rat());
    if (s.im().rat_sqrt2() != 0) j["im_sqrt2"] = rational_to_string(s.im().rat_sqrt2());
    return j;
}

inline json scalar_to_json(const FloatScalar& s) {
    json j = json::object();
    j["re"] = FloatScalar::to_decimal(s.re());
    if (s.im() != 0) j["im"] = FloatScalar::to_decimal(s.im());
    return j;
}

template <ScalarField K>
K scalar_from_json(const json& j);

template <>
inline ExactScalar scalar_from_json<ExactScalar>(const json& j) {
    check_keys(j, {"re", "re_sqrt2", "im", "im_sqrt2"}, "coefficient");
    auto get = [&](const char* k) {
        return j.contains(k) ? rational_from_string(j.at(k).get<std::string>()) : mpq_class(0);
    };
    return ExactScalar::make(get("re"), get("re_sqrt2"), get("im"), get("im_sqrt2"));
}

template <>
inline FloatScalar scalar_from_json<FloatScalar>(const json& j) {
    check_keys(j, {"re", "im"}, "coefficient");
    mpf_class re = j.contains("re") ? FloatScalar::from_decimal(j.at("re").get<std::string>())
                                    : mpf_class(0);
    mpf_class im = j.contains("im") ? FloatScalar::from_decimal(j.at("im").get<std::string>())
                                    : mpf_class(0);
    return FloatScalar(re, im);
}

// ---------------------------------------------------------------------------
// Series: graded-lex sorted term arrays [{"exp": [...], "coeff": {...}}].
// ---------------------------------------------------------------------------
template <ScalarField K>
json series_to_json(const Series<K>& f) {
    json arr = json::array();
    for (auto& [a, c] : f.terms()) {
        json term;
        term["exp"] = a.e;
        term["coeff"] = scalar_to_json(c);
        arr.push_back(term);
    }
    return arr;
}

template <ScalarField K>
Series<K> series_from_json(const json& j, unsigned nvars, unsigned cap) {
    if (!j.is_array()) throw SchemaError("series: expected a term array");
    Series<K> f(nvars, cap);
    for (auto& term : j) {
        check_keys(term, {"exp", "coeff"}, "series term");
        if (!term.contains("exp") || !term.contains("coeff"))
            throw SchemaError("series term needs exp and coeff");
        Exponent a(nvars);
        auto& ej = term.at("exp");
        if (!ej.is_array() || ej.size() != nvars)
            throw SchemaError("term exponent arity mismatch");
        for (unsigned i = 0; i < nvars; ++i) a[i] = ej.at(i).get<uint32_t>();
        if (a.total_degree() > cap)
            throw SchemaError("term total degree exceeds the truncation");
        f.add_term(a, scalar_from_json<K>(term.at("coeff")));
    }
    return f;
}

// ---------------------------------------------------------------------------
// Matrices.
// ---------------------------------------------------------------------------
template <ScalarField K>
json matrix_to_json(const SeriesMatrix<K>& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    json rows = json::array();
    for (unsigned i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (unsigned c = 0; c < m.cols(); ++c) row.push_back(series_to_json(m.at(i, c)));
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j;
}

template <ScalarField K>
SeriesMatrix<K> matrix_from_json(const json& j, unsigned nvars, unsigned cap) {
    check_keys(j, {"rows", "cols", "entries"}, "matrix");
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        throw SchemaError("matrix needs rows, cols, entries");
    unsigned rows = j.at("rows").get<unsigned>(), cols = j.at("cols").get<unsigned>();
    if (rows == 0 || cols == 0) throw SchemaError("matrix must be nonempty");
    auto& e = j.at("entries");
    if (!e.is_array() || e.size() != rows) throw SchemaError("matrix entries row count");
    SeriesMatrix<K> m(rows, cols, nvars, cap);
    for (unsigned i = 0; i < rows; ++i) {
        if (!e.at(i).is_array() || e.at(i).size() != cols)
            throw SchemaError("matrix entries column count");
        for (unsigned c = 0; c < cols; ++c)
            m.at(i, c) = series_from_json<K>(e.at(i).at(c), nvars, cap);
    }
    return m;
}

// ---------------------------------------------------------------------------
// Result payloads.
// ---------------------------------------------------------------------------
inline json residual_to_json(const ResidualReport& r) {
    json j;
    j["conjugation"] = r.conjugation;
    j["unitarity"] = r.unitarity;
    j["exact_zero"] = r.exact_zero;
    j["reliable_degree"] = r.reliable;
    return j;
}

template <ScalarField K>
json hypothesis_report_to_json(const HypothesisReport<K>& r) {
    json j;
    j["l_star"] = r.l_star;
    j["delta"] = series_to_json(r.delta);
    j["monomial_unit"] = r.monomial_unit;
    if (r.alpha) j["alpha"] = r.alpha->e;
    j["last_coeff_monomial_unit"] = r.last_coeff_monomial_unit;
    j["reliable_degree"] = r.reliable_degree;
    return j;
}

template <ScalarField K>
json diagonalization_to_json(const DiagonalizationResult<K>& r) {
    json j;
    j["unitary"] = matrix_to_json(r.u);
    json diag = json::array();
    for (auto& e : r.d) diag.push_back(series_to_json(e));
    j["diagonal"] = diag;
    json ledger = json::array();
    for (auto& rec : r.ledger) {
        json l;
        l["level"] = rec.level;
        l["block_dim"] = rec.block_dim;
        l["shift"] = series_to_json(rec.shift);
        l["monomial"] = rec.gamma.e;
        ledger.push_back(l);
    }
    j["ledger"] = ledger;
    j["residual"] = residual_to_json(r.residual);
    return j;
}

template <ScalarField K>
json realform_to_json(const RealNormalForm<K>& r) {
    json j;
    j["orthogonal"] = matrix_to_json(r.o);
    j["s"] = r.s;
    json blocks = json::array();
    for (auto& b : r.blocks) {
        json bl;
        bl["a"] = series_to_json(b.a);
        bl["b"] = series_to_json(b.b);
        blocks.push_back(bl);
    }
    j["blocks"] = blocks;
    json eig = json::array();
    for (auto& e : r.eigen_real) eig.push_back(series_to_json(e));
    j["eigenvalues"] = eig;
    j["residual"] = residual_to_json(r.residual);
    return j;
}

inline std::string svd_mode_name(SVDMode m) {
    switch (m) {
        case SVDMode::complex_diagonal: return "complex-diagonal";
        case SVDMode::real_block: return "real-block";
        default: return "real-diagonal-refined";
    }
}

template <ScalarField K>
json svd_to_json(const SVDResult<K>& r) {
    json j;
    j["v"] = matrix_to_json(r.v);
    j["u"] = matrix_to_json(r.u);
    j["d"] = matrix_to_json(r.diag);
    j["mode"] = svd_mode_name(r.mode);
    j["transposed"] = r.transposed;
    j["residual"] = residual_to_json(r.residual);
    return j;
}

} // namespace serimat
