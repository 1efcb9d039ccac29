#pragma once

#include <cmath>
#include <random>

#include "mpoly.hpp"

namespace nvlaw {

// Dense univariate view over a multivariate coefficient ring.
struct UPoly {
    VarId var = 0;
    std::vector<MPoly> c;  // c[k] multiplies var^k

    UPoly() = default;
    UPoly(const MPoly& p, VarId v) : var(v), c(coeffs_in(p, v)) { trim(); }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    const MPoly& lc() const {
        if (c.empty()) throw Error(ErrorKind::zero_polynomial, "leading coefficient of zero UPoly");
        return c.back();
    }
    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
    MPoly to_mpoly(const Ctx& ctx) const { return from_coeffs(ctx, var, c); }
    UPoly derivative() const {
        UPoly d;
        d.var = var;
        for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(c[k] * Rat(static_cast<long>(k)));
        d.trim();
        return d;
    }
};

// Fraction-free Gaussian elimination with row pivoting.
inline MPoly det_bareiss(std::vector<std::vector<MPoly>> m, const Ctx& ctx) {
    std::size_t n = m.size();
    if (n == 0) return MPoly::constant(ctx, Rat(1));
    int sign = 1;
    MPoly prev = MPoly::constant(ctx, Rat(1));
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t piv = n;
        for (std::size_t i = k; i < n; ++i) {
            if (m[i][k].is_zero()) continue;
            if (piv == n || m[i][k].nterms() < m[piv][k].nterms()) piv = i;
        }
        if (piv == n) return MPoly(ctx);
        if (piv != k) {
            std::swap(m[piv], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                MPoly t = m[k][k] * m[i][j];
                if (!m[i][k].is_zero() && !m[k][j].is_zero()) t -= m[i][k] * m[k][j];
                m[i][j] = k == 0 ? t : exact_divide(t, prev);
            }
            m[i][k] = MPoly(ctx);
        }
        prev = m[k][k];
    }
    MPoly d = m[n - 1][n - 1];
    return sign < 0 ? -d : d;
}

inline std::vector<std::vector<MPoly>> sylvester(const UPoly& f, const UPoly& g, const Ctx& ctx) {
    int m = f.degree(), n = g.degree();
    std::size_t N = static_cast<std::size_t>(m + n);
    std::vector<std::vector<MPoly>> s(N, std::vector<MPoly>(N, MPoly(ctx)));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= m; ++k) s[i][i + (m - k)] = f.c[k];
    for (int i = 0; i < m; ++i)
        for (int k = 0; k <= n; ++k) s[n + i][i + (n - k)] = g.c[k];
    return s;
}

inline MPoly resultant(const UPoly& f, const UPoly& g, const Ctx& ctx) {
    if (f.c.empty() || g.c.empty()) return MPoly(ctx);
    int m = f.degree(), n = g.degree();
    if (m <= 0 && n <= 0) throw Error(ErrorKind::undefined_resultant, "both arguments constant in the eliminated variable");
    if (m == 0) return pow(f.c[0], static_cast<unsigned>(n));
    if (n == 0) return pow(g.c[0], static_cast<unsigned>(m));
    return det_bareiss(sylvester(f, g, ctx), ctx);
}

inline MPoly resultant(const MPoly& f, const MPoly& g, VarId t) {
    const Ctx& ctx = common_ctx(f, g);
    return resultant(UPoly(f, t), UPoly(g, t), ctx);
}

inline MPoly discriminant(const UPoly& f, const Ctx& ctx) {
    int d = f.degree();
    if (d < 2) throw Error(ErrorKind::degree, "discriminant needs degree >= 2");
    MPoly r = resultant(f, f.derivative(), ctx);
    MPoly q = exact_divide(r, f.lc());
    return (d * (d - 1) / 2) % 2 ? -q : q;
}

inline MPoly discriminant(const MPoly& f, VarId t) { return discriminant(UPoly(f, t), f.ctx()); }

// ---- gcd and square-free part ----

MPoly gcd(const MPoly& a, const MPoly& b);

inline std::optional<VarId> main_variable(const MPoly& a, const MPoly& b) {
    unsigned n = std::max(a.stride(), b.stride());
    for (VarId v = 0; v < n; ++v)
        if (a.involves(v) || b.involves(v)) return v;
    return std::nullopt;
}

inline MPoly content_in(const MPoly& p, VarId v) {
    auto cs = coeffs_in(p, v);
    MPoly g(p.ctx());
    for (auto& c : cs) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? content_normalize(c) : gcd(g, c);
        if (g.is_constant()) break;
    }
    return g;
}

inline MPoly primitive_part(const MPoly& p, VarId v) {
    if (p.is_zero()) return p;
    return content_normalize(exact_divide(p, content_in(p, v)));
}

inline MPoly pseudo_remainder(const MPoly& a, const MPoly& b, VarId v) {
    unsigned n = b.degree(v);
    auto bc = coeffs_in(b, v);
    const MPoly& l = bc.back();
    MPoly r = a;
    MPoly x = MPoly::var(a.ctx(), v);
    while (!r.is_zero() && r.degree(v) >= n) {
        unsigned dr = r.degree(v);
        MPoly lr = coeffs_in(r, v).back();
        r = l * r - lr * pow(x, dr - n) * b;
        if (!r.is_zero()) r = content_normalize(r);
    }
    return r;
}

inline MPoly gcd(const MPoly& a, const MPoly& b) {
    const Ctx& ctx = common_ctx(a, b);
    if (a.is_zero()) return b.is_zero() ? MPoly(ctx) : content_normalize(b);
    if (b.is_zero()) return content_normalize(a);
    if (a.is_constant() || b.is_constant()) return MPoly::constant(ctx, Rat(1));
    auto mv = main_variable(a, b);
    VarId v = *mv;
    if (!a.involves(v)) return gcd(a, content_in(b, v));
    if (!b.involves(v)) return gcd(content_in(a, v), b);
    MPoly ca = content_in(a, v), cb = content_in(b, v);
    MPoly A = content_normalize(exact_divide(a, ca));
    MPoly B = content_normalize(exact_divide(b, cb));
    MPoly c = gcd(ca, cb);
    if (A.degree(v) < B.degree(v)) std::swap(A, B);
    MPoly g(ctx);
    for (;;) {
        MPoly r = pseudo_remainder(A, B, v);
        if (r.is_zero()) {
            g = B;
            break;
        }
        if (r.degree(v) == 0) {
            g = MPoly::constant(ctx, Rat(1));
            break;
        }
        A = B;
        B = primitive_part(r, v);
    }
    return content_normalize(c * primitive_part(g, v));
}

inline MPoly squarefree_part(const MPoly& p) {
    if (p.is_constant()) return p;
    MPoly g = p;
    for (VarId v : p.variables()) {
        g = gcd(g, derivative(p, v));
        if (g.is_constant()) break;
    }
    return content_normalize(exact_divide(p, g));
}

// ---- rational functions ----

inline RatFunc normalize(RatFunc f) {
    if (f.den.is_zero()) throw Error(ErrorKind::invalid_substitution, "zero denominator");
    const Ctx& ctx = common_ctx(f.num, f.den);
    if (f.num.is_zero()) return {MPoly(ctx), MPoly::constant(ctx, Rat(1))};
    if (!f.den.is_constant()) {
        MPoly g = gcd(f.num, f.den);
        if (!g.is_constant()) {
            f.num = exact_divide(f.num, g);
            f.den = exact_divide(f.den, g);
        }
    }
    Rat c = rational_content(f.num);
    if (f.num.leading_coef() < 0) c = -c;
    f.num /= c;
    f.den /= c;
    return f;
}

inline RatFunc rf_const(const Ctx& ctx, const MPoly& p) { return {p, MPoly::constant(ctx, Rat(1))}; }
inline RatFunc operator+(const RatFunc& a, const RatFunc& b) { return normalize({a.num * b.den + b.num * a.den, a.den * b.den}); }
inline RatFunc operator-(const RatFunc& a, const RatFunc& b) { return normalize({a.num * b.den - b.num * a.den, a.den * b.den}); }
inline RatFunc operator*(const RatFunc& a, const RatFunc& b) { return normalize({a.num * b.num, a.den * b.den}); }
inline RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.num.is_zero()) throw Error(ErrorKind::invalid_substitution, "division by zero rational function");
    return normalize({a.num * b.den, a.den * b.num});
}
inline RatFunc operator-(const RatFunc& a) { return {-a.num, a.den}; }
inline RatFunc derivative(const RatFunc& f, VarId v) {
    return normalize({derivative(f.num, v) * f.den - f.num * derivative(f.den, v), f.den * f.den});
}

// Simultaneous substitution of rational functions, denominators cleared.
inline RatFunc substitute(const MPoly& p, const std::map<VarId, RatFunc>& bind) {
    const Ctx& ctx = p.ctx();
    for (auto& [v, f] : bind)
        if (f.den.is_zero()) throw Error(ErrorKind::invalid_substitution, "zero denominator for " + ctx->name(v));
    std::map<VarId, std::vector<MPoly>> np, dp;
    std::map<VarId, unsigned> D;
    for (auto& [v, f] : bind) {
        D[v] = p.degree(v);
        auto& a = np[v];
        auto& b = dp[v];
        a.push_back(MPoly::constant(ctx, Rat(1)));
        b.push_back(MPoly::constant(ctx, Rat(1)));
        for (unsigned k = 1; k <= D[v]; ++k) {
            a.push_back(a.back() * f.num);
            b.push_back(b.back() * f.den);
        }
    }
    MPoly acc(ctx);
    unsigned n = static_cast<unsigned>(ctx->size());
    acc.ensure_stride(n);
    std::vector<Exp> e(n);
    for (std::size_t i = 0; i < p.nterms(); ++i) {
        std::fill(e.begin(), e.end(), 0);
        std::copy(p.exps(i), p.exps(i) + p.stride(), e.begin());
        for (auto& [v, f] : bind)
            if (v < n) e[v] = 0;
        MPoly t(ctx);
        t.ensure_stride(n);
        t.push_raw(e.data(), p.coef(i));
        for (auto& [v, f] : bind) {
            Exp k = p.exp(i, v);
            t = t * np[v][k] * dp[v][D[v] - k];
        }
        t.ensure_stride(n);
        for (std::size_t j = 0; j < t.nterms(); ++j) acc.push_raw(t.exps(j), t.coef(j));
    }
    acc.canonicalize();
    MPoly den = MPoly::constant(ctx, Rat(1));
    for (auto& [v, f] : bind) den = den * dp[v][D[v]];
    return normalize({acc, den});
}

// ---- parametrized curves and duality ----

struct RatParam {
    std::vector<VarId> params;
    std::vector<RatFunc> comps;
};

inline RatParam dualize_parametric(const RatParam& c) {
    if (c.params.size() != 1 || c.comps.size() != 2)
        throw Error(ErrorKind::degree, "dualize_parametric expects a one-parameter plane curve");
    VarId t = c.params[0];
    const RatFunc& x = c.comps[0];
    const RatFunc& y = c.comps[1];
    RatFunc dx = derivative(x, t), dy = derivative(y, t);
    RatFunc R = dx * y - x * dy;
    if (R.num.is_zero()) throw Error(ErrorKind::degenerate_curve, "R(t) vanishes identically");
    return {c.params, {dy / R, -dx / R}};
}

struct ImplicitResult {
    MPoly poly;                     // selected component, content-normalized
    MPoly raw;                      // raw resultant
    std::vector<MPoly> discarded;   // factors removed from the raw resultant
    unsigned degree = 0;
    unsigned expected_degree = 0;
    bool degree_matches = false;
    double max_sample_residual = 0;
    std::size_t samples = 0;
};

namespace detail {

inline double rel_residual(const MPoly& f, const std::vector<cplx>& pt) {
    CompiledPoly cp(f);
    double m = cp.magnitude(pt);
    return m == 0 ? 0 : std::abs(cp(pt)) / m;
}

inline std::vector<cplx> sample_param_point(const RatParam& c, const std::vector<VarId>& out, const Ctx& ctx,
                                            std::mt19937_64& rng, bool& ok) {
    std::normal_distribution<double> nd;
    std::vector<cplx> tv(ctx->size(), 0.0);
    for (auto t : c.params) tv[t] = cplx(nd(rng), nd(rng));
    std::vector<cplx> pt(ctx->size(), 0.0);
    ok = true;
    for (std::size_t k = 0; k < out.size(); ++k) {
        cplx den = CompiledPoly(c.comps[k].den)(tv);
        if (std::abs(den) < 1e-8) ok = false;
        pt[out[k]] = CompiledPoly(c.comps[k].num)(tv) / den;
    }
    return pt;
}

}  // namespace detail

// Eliminates the parameter of a plane parametrization; coordinates are
// named by `out` (two variables).
inline ImplicitResult implicitize(const RatParam& c, unsigned expected_degree, const std::vector<VarId>& out,
                                  std::uint64_t seed = 0x5eed) {
    if (c.params.size() != 1 || c.comps.size() != 2 || out.size() != 2)
        throw Error(ErrorKind::degree, "implicitize expects a one-parameter plane parametrization");
    const Ctx& ctx = c.comps[0].num.ctx();
    VarId t = c.params[0];
    MPoly X = MPoly::var(ctx, out[0]), Y = MPoly::var(ctx, out[1]);
    MPoly F1 = X * c.comps[0].den - c.comps[0].num;
    MPoly F2 = Y * c.comps[1].den - c.comps[1].num;
    ImplicitResult res;
    res.raw = resultant(F1, F2, t);
    if (res.raw.is_zero()) throw Error(ErrorKind::non_generic, "resultant vanishes identically");
    MPoly mono = monomial_content(res.raw);
    MPoly core = exact_divide(res.raw, mono);
    if (!mono.is_constant()) res.discarded.push_back(mono);
    MPoly sq = squarefree_part(core);
    MPoly rest = exact_divide(core, sq);
    if (!rest.is_constant()) res.discarded.push_back(content_normalize(rest));

    std::mt19937_64 rng(seed);
    std::vector<std::vector<cplx>> pts;
    while (pts.size() < 20) {
        bool ok;
        auto p = detail::sample_param_point(c, out, ctx, rng, ok);
        if (ok) pts.push_back(std::move(p));
    }
    auto vanishes = [&](const MPoly& f) {
        double worst = 0;
        for (auto& p : pts) worst = std::max(worst, detail::rel_residual(f, p));
        return worst;
    };
    // factors in a single coordinate are candidate extraneous lines
    for (VarId v : out) {
        VarId w = v == out[0] ? out[1] : out[0];
        MPoly cont = content_in(sq, w);
        if (!cont.is_constant()) {
            MPoly reduced = exact_divide(sq, cont);
            if (!reduced.is_constant() && vanishes(reduced) <= 1e-9) {
                res.discarded.push_back(cont);
                sq = content_normalize(reduced);
            }
        }
    }
    res.poly = content_normalize(sq);
    res.max_sample_residual = vanishes(res.poly);
    res.samples = pts.size();
    res.degree = res.poly.degree_in(out);
    res.expected_degree = expected_degree;
    res.degree_matches = res.degree == expected_degree;
    return res;
}

// Gradient of F at an exact point; the dual-space point of the tangent hyperplane.
inline std::vector<Rat> tangent_hyperplane(const MPoly& F, const std::vector<VarId>& vars,
                                           const std::vector<Rat>& point) {
    if (vars.size() != point.size()) throw Error(ErrorKind::cardinality, "point dimension mismatch");
    std::map<VarId, Rat> at;
    for (std::size_t k = 0; k < vars.size(); ++k) at[vars[k]] = point[k];
    if (eval_exact(F, at) != 0) throw Error(ErrorKind::singular_point, "point is not on the hypersurface");
    std::vector<Rat> g;
    bool nonzero = false;
    for (auto v : vars) {
        g.push_back(eval_exact(derivative(F, v), at));
        if (g.back() != 0) nonzero = true;
    }
    if (!nonzero) throw Error(ErrorKind::singular_point, "gradient vanishes");
    return g;
}

inline std::vector<cplx> tangent_hyperplane(const MPoly& F, const std::vector<VarId>& vars,
                                            const std::vector<cplx>& point, double tol = 1e-9) {
    if (vars.size() != point.size()) throw Error(ErrorKind::cardinality, "point dimension mismatch");
    std::vector<cplx> x(F.ctx()->size(), 0.0);
    for (std::size_t k = 0; k < vars.size(); ++k) x[vars[k]] = point[k];
    CompiledPoly cf(F);
    if (std::abs(cf(x)) > tol * std::max(1.0, cf.magnitude(x)))
        throw Error(ErrorKind::singular_point, "point is not on the hypersurface");
    std::vector<cplx> g;
    double norm = 0;
    for (auto v : vars) {
        g.push_back(CompiledPoly(derivative(F, v))(x));
        norm = std::max(norm, std::abs(g.back()));
    }
    if (norm == 0) throw Error(ErrorKind::singular_point, "gradient vanishes");
    return g;
}

}  // namespace nvlaw
