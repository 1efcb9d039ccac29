// Prints one PASS/FAIL line per acceptance criterion. The exit status is 0
// once every criterion has been evaluated; failures are reported, not hidden.
#include <cstdio>
#include <functional>
#include <future>

#include <nvlaw/checks.hpp>

using namespace nvlaw;

namespace {

struct Criterion {
    const char* id;
    const char* what;
    std::function<Report()> run;
};

Report with_runtime_limit(Report r, std::int64_t limit_ms) {
    r.details["runtime_limit_ms"] = limit_ms;
    r.expect(r.runtime_ms < limit_ms, "runtime " + std::to_string(r.runtime_ms) + " ms over the limit");
    return r;
}

std::string first_failure(const Report& r) {
    if (r.witness.is_object() && r.witness.contains("failure")) return r.witness["failure"].get<std::string>();
    return "";
}

// Descends into combined reports to name the failing sub-check.
std::string failure_detail(const Report& r) {
    std::string s = first_failure(r);
    if (r.details.contains("parts"))
        for (auto& p : r.details["parts"])
            if (p["status"] == "fail" && p["witness"].is_object() && p["witness"].contains("failure")) {
                s += ": " + p["witness"]["failure"].get<std::string>();
                break;
            }
    return s;
}

}  // namespace

int main() {
    CheckOptions o;
    o.seed = default_seed();
    auto run = [&](const std::string& id) { return run_check_safe(id, o); };
    auto with = [&](const std::string& id, auto tweak) {
        CheckOptions x = o;
        tweak(x);
        return run_check_safe(id, x);
    };

    std::vector<Criterion> cs{
        {"AC-1", "discriminant identity, exact, n=2..6, < 60 s",
         [&] { return with_runtime_limit(run("disc-equality"), 60000); }},
        {"AC-2", "shift duality, exact, n=2..5, degree (n-1)^2", [&] { return run("shift-duality"); }},
        {"AC-3", "Fermat dual: printed sextic exact, tangent vanishing <= 1e-9 at 25 points",
         [&] { return with("fermat-dual", [](CheckOptions& x) { x.tol = 1e-9; }); }},
        {"AC-4", "golden tables: Theta, B_a e-basis, nodal map, p3eqh interpolation, p4har/p6eqh vanishing",
         [&] {
             auto a = run("theta-vieta");
             auto b = with("golden-tables", [](CheckOptions& x) {
                 x.samples = 100;
                 x.tol = 1e-8;
             });
             return combine("golden", {a, b}, o.seed, "printed coefficient tables");
         }},
        {"AC-5", "discriminant factorizations, exact", [&] { return run("dfactor"); }},
        {"AC-6", "associativity, 100 triples, <= 1e-8, negative control fails",
         [&] {
             return with("assoc", [](CheckOptions& x) {
                 x.samples = 100;
                 x.tol = 1e-8;
             });
         }},
        {"AC-7", "doubling groups and iterating sets", [&] { return run("doubling"); }},
        {"AC-8", "j-invariant and singular classification", [&] { return run("j-invariant"); }},
        {"AC-9", "monoid behaviour and isomorphisms, <= 1e-9",
         [&] {
             auto a = with("monoid", [](CheckOptions& x) { x.tol = 1e-9; });
             auto b = with("iso", [](CheckOptions& x) { x.tol = 1e-9; });
             return combine("monoid", {a, b}, o.seed, "monoid behaviour");
         }},
        {"AC-10", "Chebyshev products, j,k <= 8, <= 1e-9",
         [&] {
             return with("chebyshev", [](CheckOptions& x) {
                 x.jmax = 8;
                 x.tol = 1e-9;
             });
         }},
        {"AC-11", "hypersurface duality, (2,3) (3,2) (3,3), <= 1e-8",
         [&] { return with("hypersurface-dual", [](CheckOptions& x) { x.tol = 1e-8; }); }},
    };

    Stopwatch total;
    std::vector<std::future<Report>> pending;
    for (auto& c : cs)
        pending.push_back(std::async(std::launch::async, [&c] {
            try {
                return c.run();
            } catch (const std::exception& e) {
                Report r;
                r.fail(e.what());
                return r;
            }
        }));
    int failed = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        auto& c = cs[i];
        Report r = pending[i].get();
        if (!r.passed()) ++failed;
        std::printf("%-5s %s  %s", c.id, r.passed() ? "PASS" : "FAIL", c.what);
        if (r.max_error) std::printf("  [max_error %.3g]", *r.max_error);
        std::printf("  (%lld ms)", static_cast<long long>(r.runtime_ms));
        if (!r.passed()) std::printf("\n      %s", failure_detail(r).c_str());
        std::printf("\n");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria pass; total %lld ms (limit 300000)\n", static_cast<int>(cs.size()) - failed,
                cs.size(), static_cast<long long>(total.ms()));
    return 0;
}
