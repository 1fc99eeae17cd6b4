#pragma once

#include "action.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace zpmact {

// insertion-ordered so serialised output is byte-stable
using ordered_json = nlohmann::ordered_json;

inline ordered_json vecs_to_json(const std::vector<FpVec>& vs) {
    ordered_json arr = ordered_json::array();
    for (const FpVec& v : vs) {
        ordered_json row = ordered_json::array();
        for (u32 x : v)
            row.push_back(x);
        arr.push_back(std::move(row));
    }
    return arr;
}

inline ordered_json matrix_to_json(const FpMatrix& m) {
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m.cols; ++j)
            row.push_back(m.at(i, j));
        arr.push_back(std::move(row));
    }
    return arr;
}

inline ordered_json action_to_json(const ActionData& a) {
    ordered_json j;
    j["p"] = a.p;
    j["m"] = a.m;
    j["g"] = a.g;
    j["alpha_images"] = vecs_to_json(a.alpha);
    j["beta_images"] = vecs_to_json(a.beta);
    j["branch_images"] = vecs_to_json(a.branch);
    return j;
}

namespace detail {

inline u64 require_uint(const ordered_json& j, const std::string& field) {
    if (!j.contains(field))
        throw error("missing field: " + field);
    const auto& v = j.at(field);
    if (!v.is_number_unsigned())
        throw error("field " + field + " must be a nonnegative integer");
    return v.template get<u64>();
}

inline std::vector<FpVec> require_vec_list(const ordered_json& j,
                                           const std::string& field, u32 p,
                                           std::size_t m) {
    if (!j.contains(field))
        throw error("missing field: " + field);
    const auto& arr = j.at(field);
    if (!arr.is_array())
        throw error("field " + field + " must be an array of vectors");
    std::vector<FpVec> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& row = arr.at(i);
        std::string where = field + "[" + std::to_string(i) + "]";
        if (!row.is_array())
            throw error(where + " must be an array of residues");
        if (row.size() != m)
            throw error(where + " has length " + std::to_string(row.size()) +
                        ", expected m = " + std::to_string(m));
        FpVec v;
        v.reserve(m);
        for (std::size_t t = 0; t < row.size(); ++t) {
            const auto& x = row.at(t);
            if (!x.is_number_unsigned() ||
                x.template get<u64>() >= p)
                throw error(where + "[" + std::to_string(t) +
                            "] must be a residue in [0, " +
                            std::to_string(p) + ")");
            v.push_back(x.template get<u32>());
        }
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace detail

inline ActionData action_from_json(const ordered_json& j) {
    if (!j.is_object())
        throw error("action data must be a JSON object");
    ActionData a;
    u64 p = detail::require_uint(j, "p");
    if (p < 2 || p >= max_modulus)
        throw error("field p out of range [2, 2^15)");
    a.p = static_cast<u32>(p);
    check_prime(a.p);
    a.m = static_cast<std::size_t>(detail::require_uint(j, "m"));
    if (a.m < 1)
        throw error("m must be at least 1");
    a.g = static_cast<std::size_t>(detail::require_uint(j, "g"));
    a.alpha = detail::require_vec_list(j, "alpha_images", a.p, a.m);
    a.beta = detail::require_vec_list(j, "beta_images", a.p, a.m);
    a.branch = detail::require_vec_list(j, "branch_images", a.p, a.m);
    if (a.alpha.size() != a.g)
        throw error("alpha_images has length " +
                    std::to_string(a.alpha.size()) + ", expected g = " +
                    std::to_string(a.g));
    if (a.beta.size() != a.g)
        throw error("beta_images has length " + std::to_string(a.beta.size()) +
                    ", expected g = " + std::to_string(a.g));
    return a;
}

inline ActionData parse_action(const std::string& text,
                               const std::string& origin) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw error(origin + ": " + e.what());
    }
    try {
        return action_from_json(j);
    } catch (const error& e) {
        throw error(origin + ": " + e.what());
    }
}

inline ActionData load_action(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw error("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_action(buf.str(), path);
}

inline ordered_json strong_invariant_to_json(const StrongInvariant& si) {
    ordered_json j;
    j["g"] = si.g;
    j["g_total"] = si.g_total;
    j["branch_multiset"] = vecs_to_json(si.branch_multiset);
    j["gfix_basis"] = vecs_to_json(si.gfix_basis);
    j["ann_basis"] = vecs_to_json(si.ann_basis);
    j["gram"] = matrix_to_json(si.gram);
    j["k"] = si.k;
    return j;
}

inline ordered_json weak_invariant_to_json(const WeakInvariant& wi) {
    ordered_json j;
    j["k"] = wi.k;
    j["g"] = wi.g;
    j["n"] = wi.n;
    j["r"] = wi.multiset.size();
    j["multiset"] = vecs_to_json(wi.multiset);
    return j;
}

inline ordered_json classify_report(const ActionData& a) {
    StrongInvariant si = strong_invariant(a);
    WeakInvariant wi = weak_invariant(a);
    ordered_json j;
    j["p"] = a.p;
    j["m"] = a.m;
    j["g"] = a.g;
    j["r"] = a.branch.size();
    j["total_genus"] = si.g_total;
    j["strong"] = strong_invariant_to_json(si);
    j["weak"] = weak_invariant_to_json(wi);
    return j;
}

/* Text output is a rendering of the same JSON document, so the two formats
 * cannot drift apart. */
inline void render_text(const ordered_json& j, std::ostream& os,
                        std::size_t indent = 0) {
    std::string pad(indent, ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.value().is_object()) {
                os << pad << it.key() << ":\n";
                render_text(it.value(), os, indent + 2);
            } else {
                os << pad << it.key() << ": " << it.value().dump() << "\n";
            }
        }
    } else {
        os << pad << j.dump() << "\n";
    }
}

} // namespace zpmact
