#pragma once

#include <array>

#include "mpoly.hpp"

namespace nvlaw {

using Triple = std::array<int, 3>;

// Polynomial in three symmetric variables with coefficients in the
// remaining (parameter) variables; keys are exponent triples.
using TriPoly = std::map<Triple, MPoly>;

// Symmetric polynomial written in e1, e2, e3; keys are (i, j, k) for
// e1^i e2^j e3^k.
struct SymPoly3 {
    Ctx ctx;
    std::array<VarId, 3> vars{};
    std::map<Triple, MPoly> coeffs;

    MPoly expand() const {
        MPoly x = MPoly::var(ctx, vars[0]), y = MPoly::var(ctx, vars[1]), z = MPoly::var(ctx, vars[2]);
        MPoly e1 = x + y + z, e2 = x * y + y * z + z * x, e3 = x * y * z;
        MPoly r(ctx);
        for (auto& [k, c] : coeffs) r += c * pow(e1, k[0]) * pow(e2, k[1]) * pow(e3, k[2]);
        return r;
    }

    bool operator==(const SymPoly3& o) const {
        if (coeffs.size() != o.coeffs.size()) return false;
        for (auto& [k, c] : coeffs) {
            auto it = o.coeffs.find(k);
            if (it == o.coeffs.end() || !(embed(it->second, ctx) == c)) return false;
        }
        return true;
    }
};

inline std::vector<Triple> sym_print_order(const SymPoly3& s) {
    std::vector<Triple> keys;
    for (auto& [k, c] : s.coeffs) keys.push_back(k);
    std::sort(keys.begin(), keys.end(), [](const Triple& a, const Triple& b) {
        int wa = a[0] + 2 * a[1] + 3 * a[2], wb = b[0] + 2 * b[1] + 3 * b[2];
        if (wa != wb) return wa < wb;
        if (a[0] != b[0]) return a[0] > b[0];
        return a[1] > b[1];
    });
    return keys;
}

inline std::string to_string(const SymPoly3& s) {
    if (s.coeffs.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& k : sym_print_order(s)) {
        const MPoly& c = s.coeffs.at(k);
        std::string e;
        for (int i = 0; i < 3; ++i) {
            if (!k[i]) continue;
            if (!e.empty()) e += "*";
            e += "e" + std::to_string(i + 1);
            if (k[i] > 1) e += "^" + std::to_string(k[i]);
        }
        std::string term;
        bool neg = false;
        if (c.nterms() == 1) {
            Rat a = c.coef(0);
            neg = a < 0;
            if (neg) a = -a;
            std::string m = monomial_text(c, 0);
            std::vector<std::string> parts;
            if (a != 1 || (m.empty() && e.empty())) parts.push_back(a.get_str());
            if (!m.empty()) parts.push_back(m);
            if (!e.empty()) parts.push_back(e);
            for (std::size_t i = 0; i < parts.size(); ++i) term += (i ? "*" : "") + parts[i];
        } else {
            term = "(" + to_string(c) + ")" + (e.empty() ? "" : "*" + e);
        }
        if (first) out += neg ? "-" + term : term;
        else out += (neg ? " - " : " + ") + term;
        first = false;
    }
    return out;
}

namespace detail {

using IntTri = std::map<Triple, Int>;

inline IntTri tri_mul(const IntTri& a, const IntTri& b) {
    IntTri r;
    for (auto& [ka, ca] : a)
        for (auto& [kb, cb] : b) {
            Triple k{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]};
            r[k] += ca * cb;
        }
    for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
}

class ElementaryCache {
public:
    const IntTri& get(const Triple& k) {
        auto it = cache_.find(k);
        if (it != cache_.end()) return it->second;
        IntTri r{{{0, 0, 0}, Int(1)}};
        static const IntTri e[3] = {
            {{{1, 0, 0}, Int(1)}, {{0, 1, 0}, Int(1)}, {{0, 0, 1}, Int(1)}},
            {{{1, 1, 0}, Int(1)}, {{0, 1, 1}, Int(1)}, {{1, 0, 1}, Int(1)}},
            {{{1, 1, 1}, Int(1)}},
        };
        for (int i = 0; i < 3; ++i)
            for (int p = 0; p < k[i]; ++p) r = tri_mul(r, e[i]);
        return cache_.emplace(k, std::move(r)).first->second;
    }

private:
    std::map<Triple, IntTri> cache_;
};

inline TriPoly split_triple(const MPoly& p, const std::array<VarId, 3>& v) {
    TriPoly t;
    unsigned n = p.stride();
    std::vector<Exp> e(n);
    for (std::size_t i = 0; i < p.nterms(); ++i) {
        Triple k{p.exp(i, v[0]), p.exp(i, v[1]), p.exp(i, v[2])};
        std::copy(p.exps(i), p.exps(i) + n, e.begin());
        for (auto w : v)
            if (w < n) e[w] = 0;
        auto it = t.try_emplace(k, MPoly(p.ctx())).first;
        it->second.ensure_stride(n);
        it->second.push_raw(e.data(), p.coef(i));
    }
    for (auto& [k, c] : t) c.canonicalize();
    return t;
}

}  // namespace detail

// Returns the first permutation (as text) under which p is not invariant.
inline std::optional<std::string> symmetry_witness(const MPoly& p, const std::array<VarId, 3>& v) {
    const std::array<std::pair<std::array<int, 3>, const char*>, 5> perms{{
        {{1, 0, 2}, "swap 1,2"},
        {{0, 2, 1}, "swap 2,3"},
        {{2, 1, 0}, "swap 1,3"},
        {{1, 2, 0}, "cycle 1->2->3"},
        {{2, 0, 1}, "cycle 1->3->2"},
    }};
    for (auto& [perm, name] : perms) {
        std::map<VarId, VarId> m;
        for (int i = 0; i < 3; ++i) m[v[i]] = v[perm[i]];
        if (rename(p, m) != p) {
            std::string w = std::string(name) + " (" + p.ctx()->name(v[0]) + "," + p.ctx()->name(v[1]) + "," +
                            p.ctx()->name(v[2]) + ")";
            return w;
        }
    }
    return std::nullopt;
}

// Classical leading-term reduction in lex order v0 > v1 > v2.
inline SymPoly3 to_elementary_basis(const MPoly& p, const std::array<VarId, 3>& v) {
    if (auto w = symmetry_witness(p, v)) throw Error(ErrorKind::symmetry, "not symmetric under " + *w);
    SymPoly3 out;
    out.ctx = p.ctx();
    out.vars = v;
    TriPoly rem = detail::split_triple(p, v);
    detail::ElementaryCache cache;
    while (!rem.empty()) {
        auto lead = std::prev(rem.end());
        Triple k = lead->first;
        MPoly c = lead->second;
        if (!(k[0] >= k[1] && k[1] >= k[2]))
            throw Error(ErrorKind::consistency, "leading exponent of a symmetric polynomial is not sorted");
        Triple ek{k[0] - k[1], k[1] - k[2], k[2]};
        out.coeffs[ek] = c;
        for (auto& [m, a] : cache.get(ek)) {
            auto it = rem.try_emplace(m, MPoly(p.ctx())).first;
            it->second = add_scaled(it->second, c, Rat(-a));
            if (it->second.is_zero()) rem.erase(it);
        }
    }
    return out;
}

inline SymPoly3 to_elementary_basis(const MPoly& p) {
    const Ctx& c = p.ctx();
    return to_elementary_basis(p, {c->var("x"), c->var("y"), c->var("z")});
}

// Parses an e-basis expression: e1, e2, e3 are read as placeholders.
inline SymPoly3 parse_ebasis(const Ctx& ctx, const std::string& text, const std::array<VarId, 3>& vars) {
    auto tmp = std::make_shared<Registry>();
    VarId e1 = tmp->var("e1"), e2 = tmp->var("e2"), e3 = tmp->var("e3");
    MPoly q = parse(tmp, text);
    SymPoly3 s;
    s.ctx = ctx;
    s.vars = vars;
    unsigned n = q.stride();
    std::vector<Exp> e(n);
    std::map<Triple, MPoly> parts;
    for (std::size_t i = 0; i < q.nterms(); ++i) {
        Triple k{q.exp(i, e1), q.exp(i, e2), q.exp(i, e3)};
        std::copy(q.exps(i), q.exps(i) + n, e.begin());
        e[e1] = e[e2] = e[e3] = 0;
        auto it = parts.try_emplace(k, MPoly(tmp)).first;
        it->second.ensure_stride(n);
        it->second.push_raw(e.data(), q.coef(i));
    }
    for (auto& [k, c] : parts) {
        c.canonicalize();
        s.coeffs[k] = embed(c, ctx);
    }
    return s;
}

}  // namespace nvlaw
