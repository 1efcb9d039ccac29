#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"

namespace nvlaw {

using Rat = mpq_class;
using Int = mpz_class;
using VarId = std::uint32_t;
using Exp = std::uint16_t;

// Append-only variable registry shared by every polynomial of one context.
// Registration order is the significance order of the term order.
class Registry {
public:
    Registry() = default;
    Registry(std::initializer_list<std::string> names) {
        for (const auto& n : names) var(n);
    }

    VarId var(const std::string& name) {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        if (!valid_name(name)) throw Error(ErrorKind::parse, "bad variable name '" + name + "'");
        auto id = static_cast<VarId>(names_.size());
        names_.push_back(name);
        index_.emplace(name, id);
        return id;
    }

    std::optional<VarId> find(const std::string& name) const {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> lk(mu_);
        return names_.size();
    }

    std::string name(VarId v) const {
        std::lock_guard<std::mutex> lk(mu_);
        return names_.at(v);
    }

    std::vector<std::string> names() const {
        std::lock_guard<std::mutex> lk(mu_);
        return names_;
    }

    static bool valid_name(const std::string& s) {
        if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
        return std::all_of(s.begin(), s.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
        });
    }

private:
    mutable std::mutex mu_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, VarId> index_;
};

using Ctx = std::shared_ptr<Registry>;

inline Ctx make_ctx(std::initializer_list<std::string> names = {"z", "x", "y"}) {
    return std::make_shared<Registry>(names);
}

inline Rat rat(long n, long d = 1) {
    Rat r(n, d);
    r.canonicalize();
    return r;
}

inline Rat parse_rat(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw Error(ErrorKind::parse, "bad rational '" + s + "'");
    if (r.get_den() == 0) throw Error(ErrorKind::parse, "zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

class MPoly;
MPoly operator*(const MPoly& a, const MPoly& b);

// Sparse polynomial over Q. Terms are kept strictly decreasing in graded-lex
// order, where variable 0 of the registry is the most significant.
class MPoly {
public:
    MPoly() = default;
    explicit MPoly(Ctx c) : ctx_(std::move(c)) {}

    static MPoly constant(Ctx c, const Rat& v) {
        MPoly p(std::move(c));
        if (v != 0) p.push_raw(std::vector<Exp>(p.nv_, 0).data(), v);
        return p;
    }
    static MPoly var(Ctx c, VarId v) {
        MPoly p(std::move(c));
        p.ensure_stride(v + 1);
        std::vector<Exp> e(p.nv_, 0);
        e[v] = 1;
        p.push_raw(e.data(), Rat(1));
        return p;
    }
    static MPoly var(const Ctx& c, const std::string& name) { return var(c, c->var(name)); }
    static MPoly monomial(Ctx c, const Rat& coef, const std::vector<std::pair<VarId, unsigned>>& pw) {
        MPoly p(std::move(c));
        if (coef == 0) return p;
        for (auto& [v, e] : pw) p.ensure_stride(v + 1);
        std::vector<Exp> ex(p.nv_, 0);
        for (auto& [v, e] : pw) ex[v] = static_cast<Exp>(ex[v] + e);
        p.push_raw(ex.data(), coef);
        return p;
    }

    const Ctx& ctx() const { return ctx_; }
    unsigned stride() const { return nv_; }
    std::size_t nterms() const { return coefs_.size(); }
    bool is_zero() const { return coefs_.empty(); }
    bool is_constant() const { return coefs_.empty() || (coefs_.size() == 1 && deg_[0] == 0); }
    Rat constant_value() const {
        if (coefs_.empty()) return Rat(0);
        if (!is_constant()) throw Error(ErrorKind::degree, "polynomial is not constant");
        return coefs_[0];
    }

    const Rat& coef(std::size_t i) const { return coefs_[i]; }
    Rat& coef_mut(std::size_t i) { return coefs_[i]; }
    const Exp* exps(std::size_t i) const { return exps_.data() + i * nv_; }
    Exp exp(std::size_t i, VarId v) const { return v < nv_ ? exps_[i * nv_ + v] : 0; }
    unsigned term_degree(std::size_t i) const { return deg_[i]; }

    unsigned total_degree() const {
        unsigned d = 0;
        for (auto t : deg_) d = std::max(d, t);
        return d;
    }
    unsigned degree(VarId v) const {
        unsigned d = 0;
        if (v >= nv_) return 0;
        for (std::size_t i = 0; i < nterms(); ++i) d = std::max<unsigned>(d, exps_[i * nv_ + v]);
        return d;
    }
    unsigned degree(const std::string& name) const {
        auto v = ctx_->find(name);
        return v ? degree(*v) : 0;
    }
    unsigned min_degree(VarId v) const {
        if (is_zero()) return 0;
        unsigned d = ~0u;
        for (std::size_t i = 0; i < nterms(); ++i) d = std::min<unsigned>(d, exp(i, v));
        return d;
    }
    // Degree of the subset of variables `vars` in each term, maximized.
    unsigned degree_in(const std::vector<VarId>& vars) const {
        unsigned d = 0;
        for (std::size_t i = 0; i < nterms(); ++i) {
            unsigned s = 0;
            for (auto v : vars) s += exp(i, v);
            d = std::max(d, s);
        }
        return d;
    }
    bool involves(VarId v) const { return degree(v) > 0; }
    std::vector<VarId> variables() const {
        std::vector<VarId> out;
        for (VarId v = 0; v < nv_; ++v)
            if (degree(v) > 0) out.push_back(v);
        return out;
    }

    const Rat& leading_coef() const {
        if (is_zero()) throw Error(ErrorKind::zero_polynomial, "leading coefficient of zero");
        return coefs_[0];
    }

    // Raw builders; terms may be pushed in any order and canonicalized once.
    void ensure_stride(unsigned n) {
        if (n <= nv_) return;
        std::vector<Exp> w(nterms() * n, 0);
        for (std::size_t i = 0; i < nterms(); ++i)
            std::copy(exps_.begin() + i * nv_, exps_.begin() + (i + 1) * nv_, w.begin() + i * n);
        exps_.swap(w);
        nv_ = n;
    }
    void push_raw(const Exp* e, const Rat& c) {
        unsigned d = 0;
        for (unsigned k = 0; k < nv_; ++k) d += e[k];
        exps_.insert(exps_.end(), e, e + nv_);
        coefs_.push_back(c);
        deg_.push_back(d);
    }
    void push_raw(const Exp* e, Rat&& c, unsigned d) {
        exps_.insert(exps_.end(), e, e + nv_);
        coefs_.push_back(std::move(c));
        deg_.push_back(d);
    }
    void canonicalize() {
        std::size_t n = nterms();
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return cmp_terms(a, b) > 0; });
        MPoly out(ctx_);
        out.nv_ = nv_;
        out.exps_.reserve(exps_.size());
        out.coefs_.reserve(n);
        out.deg_.reserve(n);
        for (std::size_t k = 0; k < n;) {
            std::size_t j = k;
            Rat s = coefs_[idx[k]];
            while (j + 1 < n && cmp_terms(idx[k], idx[j + 1]) == 0) {
                ++j;
                s += coefs_[idx[j]];
            }
            if (s != 0) out.push_raw(exps(idx[k]), std::move(s), deg_[idx[k]]);
            k = j + 1;
        }
        *this = std::move(out);
    }

    // Graded-lex comparison of two exponent vectors of equal stride.
    static int cmp_mono(const Exp* a, unsigned da, const Exp* b, unsigned db, unsigned n) {
        if (da != db) return da > db ? 1 : -1;
        for (unsigned k = 0; k < n; ++k)
            if (a[k] != b[k]) return a[k] > b[k] ? 1 : -1;
        return 0;
    }

    MPoly widened(unsigned n) const {
        MPoly c = *this;
        c.ensure_stride(n);
        return c;
    }

    MPoly operator-() const {
        MPoly r = *this;
        for (auto& c : r.coefs_) c = -c;
        return r;
    }
    MPoly& operator*=(const Rat& s) {
        if (s == 0) {
            clear();
        } else {
            for (auto& c : coefs_) c *= s;
        }
        return *this;
    }
    MPoly& operator/=(const Rat& s) {
        if (s == 0) throw Error(ErrorKind::consistency, "division by zero scalar");
        for (auto& c : coefs_) c /= s;
        return *this;
    }

    void clear() {
        exps_.clear();
        coefs_.clear();
        deg_.clear();
    }

    friend MPoly add_scaled(const MPoly& a, const MPoly& b, const Rat& s);
    friend MPoly operator*(const MPoly& a, const MPoly& b);
    friend std::optional<MPoly> try_divide(const MPoly& f, const MPoly& g);
    friend bool operator==(const MPoly& a, const MPoly& b);

    std::size_t hash() const {
        std::size_t h = 1469598103934665603ull;
        auto mix = [&](std::size_t v) { h = (h ^ v) * 1099511628211ull; };
        for (std::size_t i = 0; i < nterms(); ++i) {
            unsigned last = nv_;
            while (last > 0 && exps_[i * nv_ + last - 1] == 0) --last;
            for (unsigned k = 0; k < last; ++k) mix(exps_[i * nv_ + k]);
            mix(0xfeed);
            mix(std::hash<std::string>{}(coefs_[i].get_str()));
        }
        return h;
    }

private:
    int cmp_terms(std::size_t a, std::size_t b) const {
        return cmp_mono(exps(a), deg_[a], exps(b), deg_[b], nv_);
    }

    Ctx ctx_;
    unsigned nv_ = 0;
    std::vector<Exp> exps_;
    std::vector<Rat> coefs_;
    std::vector<unsigned> deg_;
};

inline const Ctx& common_ctx(const MPoly& a, const MPoly& b) {
    if (!a.ctx()) return b.ctx();
    if (!b.ctx()) return a.ctx();
    if (a.ctx() != b.ctx()) throw Error(ErrorKind::context, "polynomials from different contexts");
    return a.ctx();
}

// a + s*b by a single merge.
inline MPoly add_scaled(const MPoly& a0, const MPoly& b0, const Rat& s) {
    const Ctx& c = common_ctx(a0, b0);
    unsigned n = std::max(a0.nv_, b0.nv_);
    const MPoly& a = a0.nv_ == n ? a0 : a0.widened(n);
    MPoly bw;
    const MPoly* bp = &b0;
    if (b0.nv_ != n) {
        bw = b0.widened(n);
        bp = &bw;
    }
    const MPoly& b = *bp;
    MPoly r(c);
    r.nv_ = n;
    if (s == 0) {
        r = a;
        r.ctx_ = c;
        return r;
    }
    std::size_t i = 0, j = 0;
    r.exps_.reserve((a.nterms() + b.nterms()) * n);
    while (i < a.nterms() || j < b.nterms()) {
        int cmp;
        if (i == a.nterms()) cmp = -1;
        else if (j == b.nterms()) cmp = 1;
        else cmp = MPoly::cmp_mono(a.exps(i), a.deg_[i], b.exps(j), b.deg_[j], n);
        if (cmp > 0) {
            r.push_raw(a.exps(i), Rat(a.coefs_[i]), a.deg_[i]);
            ++i;
        } else if (cmp < 0) {
            r.push_raw(b.exps(j), Rat(s * b.coefs_[j]), b.deg_[j]);
            ++j;
        } else {
            Rat v = a.coefs_[i] + s * b.coefs_[j];
            if (v != 0) r.push_raw(a.exps(i), std::move(v), a.deg_[i]);
            ++i;
            ++j;
        }
    }
    return r;
}

inline MPoly operator+(const MPoly& a, const MPoly& b) { return add_scaled(a, b, Rat(1)); }
inline MPoly operator-(const MPoly& a, const MPoly& b) { return add_scaled(a, b, Rat(-1)); }
inline MPoly& operator+=(MPoly& a, const MPoly& b) { return a = a + b; }
inline MPoly& operator-=(MPoly& a, const MPoly& b) { return a = a - b; }
inline MPoly operator*(MPoly a, const Rat& s) { return a *= s; }
inline MPoly operator*(const Rat& s, MPoly a) { return a *= s; }
inline MPoly operator+(const MPoly& a, const Rat& s) { return a + MPoly::constant(a.ctx(), s); }
inline MPoly operator-(const MPoly& a, const Rat& s) { return a - MPoly::constant(a.ctx(), s); }
inline MPoly operator-(const Rat& s, const MPoly& a) { return MPoly::constant(a.ctx(), s) - a; }

// Heap-based product; memory stays proportional to the output.
inline MPoly operator*(const MPoly& a0, const MPoly& b0) {
    const Ctx& c = common_ctx(a0, b0);
    if (a0.is_zero() || b0.is_zero()) return MPoly(c);
    unsigned n = std::max(a0.nv_, b0.nv_);
    MPoly aw = a0.nv_ == n ? a0 : a0.widened(n);
    MPoly bw = b0.nv_ == n ? b0 : b0.widened(n);
    const MPoly* A = &aw;
    const MPoly* B = &bw;
    if (A->nterms() < B->nterms()) std::swap(A, B);
    MPoly r(c);
    r.nv_ = n;
    std::size_t nb = B->nterms();
    if (nb == 1) {
        std::vector<Exp> e(n);
        for (std::size_t i = 0; i < A->nterms(); ++i) {
            for (unsigned k = 0; k < n; ++k) e[k] = static_cast<Exp>(A->exps(i)[k] + B->exps(0)[k]);
            r.push_raw(e.data(), Rat(A->coefs_[i] * B->coefs_[0]), A->deg_[i] + B->deg_[0]);
        }
        return r;
    }
    std::vector<std::size_t> pos(nb, 0);
    std::vector<Exp> buf(nb * n);
    std::vector<unsigned> bdeg(nb);
    auto load = [&](std::size_t j) {
        const Exp* ea = A->exps(pos[j]);
        const Exp* eb = B->exps(j);
        for (unsigned k = 0; k < n; ++k) buf[j * n + k] = static_cast<Exp>(ea[k] + eb[k]);
        bdeg[j] = A->deg_[pos[j]] + B->deg_[j];
    };
    auto less = [&](std::size_t x, std::size_t y) {
        return MPoly::cmp_mono(&buf[x * n], bdeg[x], &buf[y * n], bdeg[y], n) < 0;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(less)> heap(less);
    for (std::size_t j = 0; j < nb; ++j) {
        load(j);
        heap.push(j);
    }
    std::vector<Exp> cur(n);
    Rat acc, tmp;
    while (!heap.empty()) {
        std::size_t j = heap.top();
        heap.pop();
        std::copy(&buf[j * n], &buf[j * n] + n, cur.begin());
        unsigned cd = bdeg[j];
        mpq_mul(acc.get_mpq_t(), A->coefs_[pos[j]].get_mpq_t(), B->coefs_[j].get_mpq_t());
        if (++pos[j] < A->nterms()) {
            load(j);
            heap.push(j);
        }
        while (!heap.empty()) {
            std::size_t k = heap.top();
            if (MPoly::cmp_mono(&buf[k * n], bdeg[k], cur.data(), cd, n) != 0) break;
            heap.pop();
            mpq_mul(tmp.get_mpq_t(), A->coefs_[pos[k]].get_mpq_t(), B->coefs_[k].get_mpq_t());
            acc += tmp;
            if (++pos[k] < A->nterms()) {
                load(k);
                heap.push(k);
            }
        }
        if (acc != 0) r.push_raw(cur.data(), Rat(acc), cd);
    }
    return r;
}
inline MPoly& operator*=(MPoly& a, const MPoly& b) { return a = a * b; }

inline bool operator==(const MPoly& a, const MPoly& b) {
    if (a.nterms() != b.nterms()) return false;
    if (a.nterms() == 0) return true;
    if (a.ctx_ != b.ctx_) throw Error(ErrorKind::context, "comparing polynomials from different contexts");
    for (std::size_t i = 0; i < a.nterms(); ++i) {
        if (a.deg_[i] != b.deg_[i] || a.coefs_[i] != b.coefs_[i]) return false;
        unsigned n = std::max(a.nv_, b.nv_);
        for (unsigned k = 0; k < n; ++k)
            if (a.exp(i, k) != b.exp(i, k)) return false;
    }
    return true;
}
inline bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

inline MPoly pow(const MPoly& p, unsigned k) {
    MPoly r = MPoly::constant(p.ctx(), Rat(1));
    if (k == 0) return r;
    MPoly base = p;
    bool first = true;
    while (k) {
        if (k & 1u) {
            r = first ? base : r * base;
            first = false;
        }
        k >>= 1u;
        if (k) base = base * base;
    }
    return r;
}

// Exact quotient f/g if it exists (Monagan-Pearce heap division).
inline std::optional<MPoly> try_divide(const MPoly& f0, const MPoly& g0) {
    const Ctx& c = common_ctx(f0, g0);
    if (g0.is_zero()) throw Error(ErrorKind::consistency, "division by zero polynomial");
    if (f0.is_zero()) return MPoly(c);
    unsigned n = std::max(f0.nv_, g0.nv_);
    MPoly f = f0.nv_ == n ? f0 : f0.widened(n);
    MPoly g = g0.nv_ == n ? g0 : g0.widened(n);
    MPoly q(c);
    q.nv_ = n;
    if (g.nterms() == 1) {
        std::vector<Exp> e(n);
        for (std::size_t i = 0; i < f.nterms(); ++i) {
            for (unsigned k = 0; k < n; ++k) {
                if (f.exps(i)[k] < g.exps(0)[k]) return std::nullopt;
                e[k] = static_cast<Exp>(f.exps(i)[k] - g.exps(0)[k]);
            }
            q.push_raw(e.data(), Rat(f.coefs_[i] / g.coefs_[0]), f.deg_[i] - g.deg_[0]);
        }
        return q;
    }
    // heap entries: quotient term i paired with divisor term pos[i] (>= 1)
    std::vector<std::size_t> pos;
    std::vector<Exp> buf;
    std::vector<unsigned> bdeg;
    auto load = [&](std::size_t i) {
        const Exp* eq = q.exps(i);
        const Exp* eg = g.exps(pos[i]);
        for (unsigned k = 0; k < n; ++k) buf[i * n + k] = static_cast<Exp>(eq[k] + eg[k]);
        bdeg[i] = q.deg_[i] + g.deg_[pos[i]];
    };
    auto less = [&](std::size_t x, std::size_t y) {
        return MPoly::cmp_mono(&buf[x * n], bdeg[x], &buf[y * n], bdeg[y], n) < 0;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(less)> heap(less);
    std::size_t fi = 0;
    std::vector<Exp> cur(n), qe(n);
    Rat acc, tmp;
    const Exp* lg = g.exps(0);
    while (fi < f.nterms() || !heap.empty()) {
        int cmp;
        if (heap.empty()) cmp = 1;
        else if (fi == f.nterms()) cmp = -1;
        else cmp = MPoly::cmp_mono(f.exps(fi), f.deg_[fi], &buf[heap.top() * n], bdeg[heap.top()], n);
        unsigned cd;
        if (cmp >= 0) {
            std::copy(f.exps(fi), f.exps(fi) + n, cur.begin());
            cd = f.deg_[fi];
            acc = f.coefs_[fi];
            ++fi;
        } else {
            std::size_t t = heap.top();
            std::copy(&buf[t * n], &buf[t * n] + n, cur.begin());
            cd = bdeg[t];
            acc = 0;
        }
        while (!heap.empty()) {
            std::size_t t = heap.top();
            if (MPoly::cmp_mono(&buf[t * n], bdeg[t], cur.data(), cd, n) != 0) break;
            heap.pop();
            mpq_mul(tmp.get_mpq_t(), q.coefs_[t].get_mpq_t(), g.coefs_[pos[t]].get_mpq_t());
            acc -= tmp;
            if (++pos[t] < g.nterms()) {
                load(t);
                heap.push(t);
            }
        }
        if (acc == 0) continue;
        for (unsigned k = 0; k < n; ++k) {
            if (cur[k] < lg[k]) return std::nullopt;
            qe[k] = static_cast<Exp>(cur[k] - lg[k]);
        }
        q.push_raw(qe.data(), Rat(acc / g.coefs_[0]), cd - g.deg_[0]);
        std::size_t i = q.nterms() - 1;
        pos.push_back(1);
        buf.resize(q.nterms() * n);
        bdeg.resize(q.nterms());
        load(i);
        heap.push(i);
    }
    return q;
}

inline MPoly exact_divide(const MPoly& f, const MPoly& g) {
    auto q = try_divide(f, g);
    if (!q) throw Error(ErrorKind::consistency, "inexact polynomial division");
    return std::move(*q);
}

inline MPoly derivative(const MPoly& p, VarId v) {
    MPoly r(p.ctx());
    r.ensure_stride(p.stride());
    std::vector<Exp> e(p.stride());
    for (std::size_t i = 0; i < p.nterms(); ++i) {
        Exp d = p.exp(i, v);
        if (d == 0) continue;
        std::copy(p.exps(i), p.exps(i) + p.stride(), e.begin());
        e[v] = static_cast<Exp>(d - 1);
        r.push_raw(e.data(), Rat(p.coef(i) * d), p.term_degree(i) - 1);
    }
    return r;
}

// Coefficients of p viewed as a polynomial in v: result[k] multiplies v^k.
inline std::vector<MPoly> coeffs_in(const MPoly& p, VarId v) {
    unsigned d = p.degree(v);
    std::vector<MPoly> out(d + 1, MPoly(p.ctx()));
    for (auto& o : out) o.ensure_stride(p.stride());
    std::vector<Exp> e(p.stride());
    for (std::size_t i = 0; i < p.nterms(); ++i) {
        Exp k = p.exp(i, v);
        std::copy(p.exps(i), p.exps(i) + p.stride(), e.begin());
        if (v < p.stride()) e[v] = 0;
        out[k].push_raw(e.data(), Rat(p.coef(i)), p.term_degree(i) - k);
    }
    for (auto& o : out) o.canonicalize();
    return out;
}

inline MPoly from_coeffs(const Ctx& c, VarId v, const std::vector<MPoly>& cs) {
    MPoly r(c);
    MPoly x = MPoly::var(c, v);
    for (std::size_t k = cs.size(); k-- > 0;) r = r * x + cs[k];
    return r;
}

// Polynomial composition: replaces each bound variable by a polynomial.
inline MPoly compose(const MPoly& p, const std::map<VarId, MPoly>& bind) {
    const Ctx& c = p.ctx();
    std::map<VarId, std::vector<MPoly>> powers;
    for (auto& [v, q] : bind) {
        unsigned d = p.degree(v);
        auto& tab = powers[v];
        tab.push_back(MPoly::constant(c, Rat(1)));
        for (unsigned k = 1; k <= d; ++k) tab.push_back(tab.back() * q);
    }
    unsigned n = p.stride();
    for (auto& [v, q] : bind) n = std::max(n, q.stride());
    MPoly acc(c);
    acc.ensure_stride(n);
    std::vector<Exp> e(n);
    for (std::size_t i = 0; i < p.nterms(); ++i) {
        std::fill(e.begin(), e.end(), 0);
        std::copy(p.exps(i), p.exps(i) + p.stride(), e.begin());
        for (auto& [v, q] : bind)
            if (v < e.size()) e[v] = 0;
        MPoly t(c);
        t.ensure_stride(n);
        t.push_raw(e.data(), p.coef(i));
        for (auto& [v, q] : bind) {
            Exp k = p.exp(i, v);
            if (k) t = t * powers[v][k];
        }
        for (std::size_t j = 0; j < t.nterms(); ++j) acc.push_raw(t.exps(j), t.coef(j));
    }
    acc.canonicalize();
    return acc;
}

inline MPoly substitute_value(const MPoly& p, VarId v, const Rat& val) {
    return compose(p, {{v, MPoly::constant(p.ctx(), val)}});
}

inline MPoly rename(const MPoly& p, const std::map<VarId, VarId>& m) {
    std::map<VarId, MPoly> b;
    for (auto& [from, to] : m) b.emplace(from, MPoly::var(p.ctx(), to));
    return compose(p, b);
}

struct RatFunc {
    MPoly num;
    MPoly den;
};

inline Rat rational_content(const MPoly& p) {
    if (p.is_zero()) throw Error(ErrorKind::zero_polynomial, "content of zero polynomial");
    Int g = 0, l = 1;
    for (std::size_t i = 0; i < p.nterms(); ++i) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), p.coef(i).get_num_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), p.coef(i).get_den_mpz_t());
    }
    Rat c(g, l);
    c.canonicalize();
    return c;
}

// Coprime integer coefficients, positive leading coefficient.
inline MPoly content_normalize(const MPoly& p) {
    Rat c = rational_content(p);
    if (p.leading_coef() < 0) c = -c;
    MPoly r = p;
    r /= c;
    return r;
}

inline MPoly monic(const MPoly& p) {
    MPoly r = p;
    r /= p.leading_coef();
    return r;
}

inline MPoly homogenize(const MPoly& p, VarId h, unsigned degree, const std::vector<VarId>& vars) {
    if (p.degree_in(vars) > degree)
        throw Error(ErrorKind::degree, "homogenization degree below polynomial degree");
    MPoly r(p.ctx());
    unsigned n = std::max<unsigned>(p.stride(), h + 1);
    r.ensure_stride(n);
    std::vector<Exp> e(n);
    for (std::size_t i = 0; i < p.nterms(); ++i) {
        std::fill(e.begin(), e.end(), 0);
        std::copy(p.exps(i), p.exps(i) + p.stride(), e.begin());
        unsigned s = 0;
        for (auto v : vars) s += p.exp(i, v);
        e[h] = static_cast<Exp>(e[h] + degree - s);
        r.push_raw(e.data(), p.coef(i));
    }
    r.canonicalize();
    return r;
}

inline MPoly homogenize(const MPoly& p, VarId h, unsigned degree) {
    std::vector<VarId> all;
    for (VarId v = 0; v < p.stride(); ++v)
        if (v != h) all.push_back(v);
    return homogenize(p, h, degree, all);
}

inline bool is_homogeneous(const MPoly& p) {
    for (std::size_t i = 1; i < p.nterms(); ++i)
        if (p.term_degree(i) != p.term_degree(0)) return false;
    return true;
}

// Largest monomial dividing every term.
inline MPoly monomial_content(const MPoly& p) {
    std::vector<std::pair<VarId, unsigned>> pw;
    for (VarId v = 0; v < p.stride(); ++v) {
        unsigned m = p.min_degree(v);
        if (m) pw.emplace_back(v, m);
    }
    return MPoly::monomial(p.ctx(), Rat(1), pw);
}

inline Rat eval_exact(const MPoly& p, const std::map<VarId, Rat>& at) {
    std::map<VarId, MPoly> b;
    for (auto& [v, r] : at) b.emplace(v, MPoly::constant(p.ctx(), r));
    MPoly q = compose(p, b);
    if (!q.is_constant()) throw Error(ErrorKind::degree, "evaluation left free variables");
    return q.constant_value();
}

using cplx = std::complex<double>;

// Double-precision image of an MPoly for fast repeated evaluation.
struct CompiledPoly {
    unsigned nv = 0;
    std::vector<double> coef;
    std::vector<Exp> exps;
    std::vector<unsigned> maxdeg;

    explicit CompiledPoly(const MPoly& p) : nv(p.stride()), maxdeg(p.stride(), 0) {
        for (std::size_t i = 0; i < p.nterms(); ++i) {
            coef.push_back(p.coef(i).get_d());
            exps.insert(exps.end(), p.exps(i), p.exps(i) + nv);
            for (unsigned k = 0; k < nv; ++k) maxdeg[k] = std::max<unsigned>(maxdeg[k], p.exps(i)[k]);
        }
    }
    cplx operator()(const std::vector<cplx>& x) const {
        std::vector<std::vector<cplx>> pw(nv);
        for (unsigned k = 0; k < nv; ++k) {
            pw[k].resize(maxdeg[k] + 1);
            pw[k][0] = 1.0;
            for (unsigned d = 1; d <= maxdeg[k]; ++d) pw[k][d] = pw[k][d - 1] * (k < x.size() ? x[k] : cplx(0));
        }
        cplx s = 0;
        for (std::size_t i = 0; i < coef.size(); ++i) {
            cplx t = coef[i];
            for (unsigned k = 0; k < nv; ++k) {
                Exp e = exps[i * nv + k];
                if (e) t *= pw[k][e];
            }
            s += t;
        }
        return s;
    }
    // Sum of |coef * monomial| at x; a scale for relative residuals.
    double magnitude(const std::vector<cplx>& x) const {
        double s = 0;
        for (std::size_t i = 0; i < coef.size(); ++i) {
            double t = std::abs(coef[i]);
            for (unsigned k = 0; k < nv; ++k) {
                Exp e = exps[i * nv + k];
                if (e) t *= std::pow(std::abs(k < x.size() ? x[k] : cplx(0)), e);
            }
            s += t;
        }
        return s;
    }
};

// ---- text format ----

inline std::string coef_text(const Rat& c) { return c.get_str(); }

inline std::string monomial_text(const MPoly& p, std::size_t i) {
    std::vector<std::pair<std::string, Exp>> f;
    for (VarId v = 0; v < p.stride(); ++v)
        if (p.exp(i, v)) f.emplace_back(p.ctx()->name(v), p.exp(i, v));
    std::sort(f.begin(), f.end());
    std::string s;
    for (auto& [name, e] : f) {
        if (!s.empty()) s += "*";
        s += name;
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

inline std::string to_string(const MPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < p.nterms(); ++i) {
        Rat c = p.coef(i);
        bool neg = c < 0;
        if (neg) c = -c;
        if (i == 0) out += neg ? "-" : "";
        else out += neg ? " - " : " + ";
        std::string m = monomial_text(p, i);
        if (m.empty()) out += coef_text(c);
        else if (c == 1) out += m;
        else out += coef_text(c) + "*" + m;
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const MPoly& p) { return os << to_string(p); }

namespace detail {

class Parser {
public:
    Parser(const Ctx& c, const std::string& s) : ctx_(c), s_(s) {}

    MPoly parse() {
        MPoly r = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return r;
    }

private:
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& m) const {
        throw Error(ErrorKind::parse, m + " at offset " + std::to_string(i_));
    }
    MPoly expr() {
        skip();
        MPoly r(ctx_);
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        MPoly t = term();
        r = neg ? -t : t;
        for (;;) {
            if (eat('+')) r += term();
            else if (eat('-')) r -= term();
            else break;
        }
        return r;
    }
    MPoly term() {
        MPoly r = power();
        for (;;) {
            if (eat('*')) {
                r = r * power();
            } else if (eat('/')) {
                MPoly d = power();
                if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
                r /= d.constant_value();
            } else {
                break;
            }
        }
        return r;
    }
    MPoly power() {
        MPoly b = atom();
        if (eat('^')) {
            skip();
            std::size_t st = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (st == i_) fail("expected exponent");
            b = pow(b, static_cast<unsigned>(std::stoul(s_.substr(st, i_ - st))));
        }
        return b;
    }
    MPoly atom() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end");
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            MPoly r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (c == '-') {
            ++i_;
            return -power();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t st = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return MPoly::constant(ctx_, Rat(s_.substr(st, i_ - st)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t st = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            return MPoly::var(ctx_, s_.substr(st, i_ - st));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Ctx ctx_;
    const std::string& s_;
    std::size_t i_ = 0;
};

}  // namespace detail

inline MPoly parse(const Ctx& c, const std::string& s) { return detail::Parser(c, s).parse(); }

// Convenience for building polynomials from text inside one context.
struct PolyBuilder {
    Ctx ctx;
    MPoly operator()(const std::string& s) const { return parse(ctx, s); }
    MPoly v(const std::string& name) const { return MPoly::var(ctx, name); }
    MPoly k(const Rat& r) const { return MPoly::constant(ctx, r); }
    VarId id(const std::string& name) const { return ctx->var(name); }
};

// Carries p into another registry, matching variables by name.
inline MPoly embed(const MPoly& p, const Ctx& target) {
    if (p.ctx() == target) return p;
    MPoly r(target);
    std::vector<VarId> map(p.stride(), 0);
    for (VarId v = 0; v < p.stride(); ++v)
        if (p.degree(v) > 0) map[v] = target->var(p.ctx()->name(v));
    r.ensure_stride(static_cast<unsigned>(target->size()));
    std::vector<Exp> e(r.stride());
    for (std::size_t i = 0; i < p.nterms(); ++i) {
        std::fill(e.begin(), e.end(), 0);
        for (VarId v = 0; v < p.stride(); ++v)
            if (p.exp(i, v)) e[map[v]] = p.exp(i, v);
        r.push_raw(e.data(), p.coef(i));
    }
    r.canonicalize();
    return r;
}

}  // namespace nvlaw

template <>
struct std::hash<nvlaw::MPoly> {
    std::size_t operator()(const nvlaw::MPoly& p) const { return p.hash(); }
};
