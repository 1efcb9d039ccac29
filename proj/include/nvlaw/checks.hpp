#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>

#include "numeric.hpp"

namespace nvlaw {

struct CheckOptions {
    std::optional<unsigned> n, m, jmax;
    std::string family;
    ParamMap params;
    std::string kind;
    std::uint64_t seed = kDefaultSeed;
    std::optional<double> tol;
    unsigned jobs = 1;
    std::optional<unsigned> samples;
    bool fast = false;
};

// Seed from NVLAW_SEED when set, otherwise the documented default.
inline std::uint64_t default_seed() {
    const char* s = std::getenv("NVLAW_SEED");
    if (!s || !*s) return kDefaultSeed;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 0);
    if (*end) throw Error(ErrorKind::usage, std::string("NVLAW_SEED is not an integer: ") + s);
    return v;
}

inline const std::vector<std::string>& check_ids() {
    static const std::vector<std::string> ids{
        "assoc",      "chebyshev",   "coset",       "dfactor",  "disc-equality",    "doubling",
        "ec-group",   "fermat-dual", "golden-tables", "hypersurface-dual", "iso", "j-invariant",
        "monoid",     "neutral",     "shift-duality", "theta-vieta",
    };
    return ids;
}

inline std::vector<std::string> suite_ids(const std::string& tag) {
    if (tag == "all") return check_ids();
    if (tag == "duality") return {"disc-equality", "fermat-dual", "hypersurface-dual", "shift-duality"};
    if (tag == "golden") return {"dfactor", "golden-tables", "theta-vieta"};
    if (tag == "numeric") return {"assoc", "chebyshev", "coset", "doubling", "ec-group", "iso", "monoid", "neutral"};
    throw Error(ErrorKind::usage, "unknown tag " + tag);
}

// Folds several reports into one; the first failing part supplies the witness.
inline Report combine(const std::string& check, const std::vector<Report>& parts, std::uint64_t seed,
                      const std::string& citation) {
    Report r;
    r.check = check;
    r.seed = seed;
    r.citation = citation;
    json arr = json::array();
    for (auto& p : parts) {
        if (p.max_error) r.bump_error(*p.max_error);
        r.runtime_ms += p.runtime_ms;
        if (!p.passed()) {
            std::string what = p.check + " " + p.params.dump() + " failed";
            if (r.witness.is_null()) {
                r.fail(what, p.witness);
            } else {
                r.details["failures"].push_back(what);
            }
        }
        json j = p.to_json();
        j.erase("schema");
        j.erase("seed");
        j.erase("runtime_ms");
        arr.push_back(std::move(j));
    }
    r.details["parts"] = std::move(arr);
    return r;
}

namespace detail {

inline Ctx check_ctx() { return make_ctx(); }

inline std::vector<LawPoly> assoc_catalog(const Ctx& c) {
    std::vector<LawPoly> out;
    for (auto a : std::vector<std::array<int, 3>>{{1, 2, 3}, {0, 1, 1}, {2, -1, 5}})
        out.push_back(build_buchstaber(c, {{"a1", Rat(a[0])}, {"a2", Rat(a[1])}, {"a3", Rat(a[2])}}));
    for (unsigned n : {2u, 3u, 4u}) out.push_back(build_pn(c, n));
    out.push_back(build_coset_law(c, Family::Eqh3, {{"c", Rat(2)}}));
    out.push_back(build_coset_law(c, Family::Har4, {{"b", Rat(1)}}));
    out.push_back(build_coset_law(c, Family::Eqh6, {{"c", Rat(1)}}));
    out.push_back(build_nodal(c, {{"alpha", Rat(1)}, {"beta", Rat(-2)}}));
    out.push_back(build_cusp(c, {{"alpha", Rat(2)}}));
    out.push_back(build_chebyshev(c));
    return out;
}

inline std::vector<LawPoly> doubling_catalog(const Ctx& c) {
    return {build_buchstaber(c, {{"a1", Rat(0)}, {"a2", Rat(1)}, {"a3", Rat(1)}}),
            build_coset_law(c, Family::Eqh3, {{"c", Rat(2)}}),
            build_coset_law(c, Family::Har4, {{"b", Rat(2)}}),
            build_coset_law(c, Family::Eqh6, {{"c", Rat(2)}}),
            build_chebyshev(c),
            build_nodal(c, {{"alpha", Rat(1)}, {"beta", Rat(-2)}}),
            build_cusp(c, {{"alpha", Rat(2)}})};
}

inline IsoKind parse_iso(const std::string& s) {
    for (auto k : {IsoKind::NodalToBa, IsoKind::CuspToM2, IsoKind::ZplusToG2, IsoKind::MultShiftToBa})
        if (s == iso_name(k)) return k;
    throw Error(ErrorKind::usage, "unknown isomorphism kind " + s);
}

inline unsigned need_range(const std::optional<unsigned>& v, unsigned lo, unsigned hi, const char* what) {
    if (*v < lo || *v > hi)
        throw Error(ErrorKind::usage, std::string(what) + " must lie in [" + std::to_string(lo) + ", " +
                                          std::to_string(hi) + "]");
    return *v;
}

}  // namespace detail

inline Report run_check(const std::string& id, const CheckOptions& o) {
    const std::uint64_t seed = o.seed;
    auto tol = [&](double d) { return o.tol.value_or(d); };
    auto samples = [&](unsigned d) { return o.samples.value_or(d); };
    if (id == "disc-equality") {
        if (o.n) return verify_disc_identity(detail::need_range(o.n, 2, 8, "n"));
        std::vector<Report> parts;
        for (unsigned n = 2; n <= 6; ++n) parts.push_back(verify_disc_identity(n));
        return combine(id, parts, seed, parts.front().citation);
    }
    if (id == "shift-duality") {
        if (o.n) return verify_shift_duality(detail::need_range(o.n, 2, 6, "n"), seed);
        std::vector<Report> parts;
        for (unsigned n = 2; n <= 5; ++n) parts.push_back(verify_shift_duality(n, seed));
        return combine(id, parts, seed, parts.front().citation);
    }
    if (id == "fermat-dual") {
        if (o.n) return verify_fermat_dual(detail::need_range(o.n, 2, 8, "n"), seed, tol(1e-9));
        std::vector<Report> parts;
        for (unsigned n = 2; n <= 5; ++n) parts.push_back(verify_fermat_dual(n, seed, tol(1e-9)));
        return combine(id, parts, seed, parts.front().citation);
    }
    if (id == "hypersurface-dual") {
        if (o.n || o.m) {
            if (!o.n || !o.m) throw Error(ErrorKind::usage, "hypersurface-dual needs both --n and --m");
            return verify_hypersurface_dual(detail::need_range(o.n, 2, 4, "n"), detail::need_range(o.m, 2, 4, "m"),
                                            seed, tol(1e-8));
        }
        std::vector<Report> parts;
        for (auto [n, m] : {std::pair{2u, 3u}, {3u, 2u}, {3u, 3u}})
            parts.push_back(verify_hypersurface_dual(n, m, seed, tol(1e-8)));
        return combine(id, parts, seed, parts.front().citation);
    }
    if (id == "theta-vieta") return verify_theta_vieta();
    if (id == "dfactor") return verify_discriminant_factorizations(!o.fast);
    if (id == "golden-tables") {
        std::vector<Report> parts{verify_golden_symbolic(), verify_eqh3_recovery(seed),
                                  verify_coset_vanishing(Family::Har4, seed, samples(100), tol(1e-8)),
                                  verify_coset_vanishing(Family::Eqh6, seed, samples(100), tol(1e-8))};
        return combine(id, parts, seed, "printed coefficient tables");
    }
    if (id == "assoc") {
        auto c = detail::check_ctx();
        if (!o.family.empty()) return check_associativity(build_law(c, o.family, o.params), samples(100), seed, tol(1e-8), o.jobs);
        auto laws = detail::assoc_catalog(c);
        std::vector<Report> parts;
        for (auto& L : laws) parts.push_back(check_associativity(L, samples(100), seed, tol(1e-8), o.jobs));
        Report neg = check_associativity(perturbed(laws.front()), samples(100), seed, tol(1e-8), o.jobs);
        Report ctl;
        ctl.check = "negative-control";
        ctl.params = neg.params;
        ctl.details["perturbed_status"] = neg.status;
        ctl.details["perturbed_max_error"] = neg.max_error ? json(*neg.max_error) : json(nullptr);
        ctl.expect(!neg.passed(), "perturbed law passed the associativity check");
        parts.push_back(ctl);
        return combine(id, parts, seed, "associativity of the n-valued product");
    }
    if (id == "neutral") {
        auto c = detail::check_ctx();
        std::vector<LawPoly> laws;
        if (!o.family.empty()) laws.push_back(build_law(c, o.family, o.params));
        else laws = detail::assoc_catalog(c);
        std::vector<Report> parts;
        for (auto& L : laws) {
            if (L.neutral) parts.push_back(check_neutral(L, samples(50), seed, tol(1e-9)));
            if (!L.inverse.empty()) parts.push_back(check_inverse(L, samples(50), seed, tol(1e-8)));
            if (L.absorbing) parts.push_back(check_absorbing(L, samples(30), seed, tol(1e-9)));
        }
        if (parts.empty()) throw Error(ErrorKind::usage, "law has no neutral, inverse or absorbing element");
        if (parts.size() == 1) return parts.front();
        return combine(id, parts, seed, "neutral, inverse and absorbing elements");
    }
    if (id == "doubling") {
        auto c = detail::check_ctx();
        if (!o.family.empty() || !o.params.empty()) {
            std::string fam = o.family.empty() ? "buchstaber" : o.family;
            LawPoly L = build_law(c, fam, o.params);
            if (L.family == Family::Buchstaber) {
                Rat d = cubic_delta(L.params["a1"], L.params["a2"], L.params["a3"]);
                if (d == 0) throw Error(ErrorKind::singular_curve, "delta_a = 0");
            }
            return verify_doubling(L, tol(1e-7));
        }
        std::vector<Report> parts;
        for (auto& L : detail::doubling_catalog(c)) parts.push_back(verify_doubling(L, tol(1e-7)));
        return combine(id, parts, seed, "iterating elements and the doubling group");
    }
    if (id == "chebyshev") return chebyshev_check(o.jmax ? detail::need_range(o.jmax, 2, 64, "jmax") : 8, seed, tol(1e-9));
    if (id == "iso") {
        if (!o.kind.empty()) return monoid_isomorphism_check(detail::parse_iso(o.kind), seed, tol(1e-9));
        std::vector<Report> parts;
        for (auto k : {IsoKind::CuspToM2, IsoKind::MultShiftToBa, IsoKind::NodalToBa, IsoKind::ZplusToG2})
            parts.push_back(monoid_isomorphism_check(k, seed, tol(1e-9)));
        return combine(id, parts, seed, "monoid isomorphisms");
    }
    if (id == "coset") return verify_coset_products(seed, samples(20), tol(1e-8));
    if (id == "ec-group") return verify_ec_group(seed, samples(100), tol(1e-9));
    if (id == "j-invariant") return verify_j_invariant();
    if (id == "monoid") return verify_monoid_behavior(seed, tol(1e-9));
    throw Error(ErrorKind::usage, "unknown check id " + id);
}

// Errors caused by the request itself rather than by the mathematics.
inline bool is_usage_error(ErrorKind k) {
    switch (k) {
    case ErrorKind::usage:
    case ErrorKind::parse:
    case ErrorKind::budget:
    case ErrorKind::degree:
    case ErrorKind::singular_curve:
    case ErrorKind::symmetry:
    case ErrorKind::invalid_substitution: return true;
    default: return false;
    }
}

// Runs a check and converts internal errors into a failing report.
inline Report run_check_safe(const std::string& id, const CheckOptions& o) {
    try {
        return run_check(id, o);
    } catch (const Error& e) {
        if (is_usage_error(e.kind())) throw;
        Report r;
        r.check = id;
        r.seed = o.seed;
        r.fail(e.what());
        return r;
    }
}

// Runs the listed checks on up to `jobs` threads. Reports are ordered by check id and
// handed to `emit` as soon as every earlier id has finished.
inline std::vector<Report> run_suite(const std::vector<std::string>& ids, const CheckOptions& o,
                                     const std::function<void(const Report&)>& emit = {}) {
    std::vector<std::string> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Report> out(sorted.size());
    std::vector<char> done(sorted.size(), 0);
    std::size_t flushed = 0;
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    CheckOptions inner = o;
    inner.jobs = 1;
    auto worker = [&] {
        for (std::size_t i; (i = next++) < sorted.size();) {
            Report r = run_check_safe(sorted[i], inner);
            std::lock_guard<std::mutex> lk(mu);
            out[i] = std::move(r);
            done[i] = 1;
            for (; flushed < sorted.size() && done[flushed]; ++flushed)
                if (emit) emit(out[flushed]);
        }
    };
    unsigned jobs = std::max(1u, std::min<unsigned>(o.jobs, static_cast<unsigned>(sorted.size())));
    std::vector<std::thread> ts;
    for (unsigned w = 1; w < jobs; ++w) ts.emplace_back(worker);
    worker();
    for (auto& t : ts) t.join();
    return out;
}

}  // namespace nvlaw
