#include <iostream>

#include <CLI11.hpp>

#include <nvlaw/checks.hpp>

using namespace nvlaw;

namespace {

struct ParamFlags {
    std::optional<unsigned> n, m;
    std::string a, b, c, alpha, beta, g2, g3;

    void add(CLI::App* cmd) {
        cmd->add_option("--n", n, "valence or degree");
        cmd->add_option("--m", m, "second degree");
        cmd->add_option("--a", a, "a1,a2,a3");
        cmd->add_option("--b", b);
        cmd->add_option("--c", c);
        cmd->add_option("--alpha", alpha);
        cmd->add_option("--beta", beta);
        cmd->add_option("--g2", g2);
        cmd->add_option("--g3", g3);
    }

    ParamMap to_map(bool with_degrees) const {
        ParamMap pm;
        if (!a.empty()) {
            std::vector<std::string> parts;
            std::stringstream ss(a);
            for (std::string t; std::getline(ss, t, ',');) parts.push_back(t);
            if (parts.size() != 3) throw Error(ErrorKind::usage, "--a expects three comma-separated values");
            for (int i = 0; i < 3; ++i) pm["a" + std::to_string(i + 1)] = parse_rat(parts[i]);
        }
        for (auto [k, v] : {std::pair{"b", &b}, {"c", &c}, {"alpha", &alpha}, {"beta", &beta}, {"g2", &g2}, {"g3", &g3}})
            if (!v->empty()) pm[k] = parse_rat(*v);
        if (with_degrees) {
            if (n) pm["n"] = Rat(*n);
            if (m) pm["m"] = Rat(*m);
        }
        return pm;
    }
};

bool takes_degrees(const std::string& family) { return family == "pn" || family == "mn" || family == "pnm"; }

int report_error(const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_usage_error(e.kind()) ? 2 : 1;
}

void summary(const Report& r) {
    std::cerr << r.check << ": " << (r.passed() ? "PASS" : "FAIL");
    if (r.max_error) std::cerr << " max_error=" << *r.max_error;
    std::cerr << " (" << r.runtime_ms << " ms)\n";
    if (!r.passed() && r.witness.contains("failure")) std::cerr << "  " << r.witness["failure"].get<std::string>() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"n-valued group laws: generation, duality and verification"};
    app.require_subcommand(1);

    ParamFlags pf;
    std::string family, format = "text", check, curve = "xn", tag;
    std::string seed_str;
    std::optional<double> tol;
    std::optional<unsigned> samples, jmax;
    std::string kind;
    unsigned jobs = 1;
    bool force = false, all = false, fast = false;

    auto* law = app.add_subcommand("law", "law polynomials");
    law->require_subcommand(1);
    auto* gen = law->add_subcommand("gen", "print a law polynomial");
    gen->add_option("--family", family, "law family")->required();
    pf.add(gen);
    gen->add_option("--format", format)->check(CLI::IsMember({"text", "json", "ebasis"}));
    gen->add_flag("--force", force, "lift the degree budget");

    auto* verify = app.add_subcommand("verify", "run one check");
    verify->add_option("check", check, "check id")->required();
    pf.add(verify);
    verify->add_option("--family", family);
    verify->add_option("--kind", kind, "isomorphism kind");
    verify->add_option("--jmax", jmax);
    verify->add_option("--seed", seed_str);
    verify->add_option("--tol", tol);
    verify->add_option("--samples", samples);
    verify->add_option("--jobs", jobs);
    verify->add_flag("--fast", fast, "skip the slowest sub-checks");

    auto* dualize = app.add_subcommand("dualize", "projective dual of a curve");
    dualize->add_option("--curve", curve)->check(CLI::IsMember({"xn", "fermat"}));
    dualize->add_option("--n", pf.n)->required();
    dualize->add_option("--seed", seed_str);
    dualize->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    dualize->add_flag("--force", force, "lift the degree budget");

    auto* suite = app.add_subcommand("suite", "run a group of checks as JSONL");
    auto* all_opt = suite->add_flag("--all", all);
    suite->add_option("--tag", tag)->excludes(all_opt);
    suite->add_option("--jobs", jobs);
    suite->add_option("--seed", seed_str);
    suite->add_flag("--fast", fast, "skip the slowest sub-checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        std::uint64_t seed = default_seed();
        if (!seed_str.empty()) {
            char* end = nullptr;
            seed = std::strtoull(seed_str.c_str(), &end, 0);
            if (*end) throw Error(ErrorKind::usage, "--seed is not an integer");
        }

        if (*gen) {
            auto c = make_ctx();
            LawPoly L = build_law(c, family, pf.to_map(takes_degrees(family)), force);
            if (format == "json") {
                std::cout << law_json(L).dump(2) << "\n";
            } else if (format == "ebasis") {
                std::cout << to_string(to_elementary_basis(L.poly)) << "\n";
            } else {
                std::cout << to_string(L.poly) << "\n";
            }
            return 0;
        }

        if (*verify) {
            CheckOptions o;
            o.n = pf.n;
            o.m = pf.m;
            o.family = family;
            o.params = pf.to_map(takes_degrees(family));
            o.kind = kind;
            o.jmax = jmax;
            o.seed = seed;
            o.tol = tol;
            o.samples = samples;
            o.jobs = std::max(1u, jobs);
            o.fast = fast;
            Report r = run_check_safe(check, o);
            r.seed = seed;
            std::cout << r.to_json().dump() << "\n";
            summary(r);
            return r.passed() ? 0 : 1;
        }

        if (*dualize) {
            unsigned n = *pf.n;
            if (n < 2) throw Error(ErrorKind::usage, "--n must be at least 2");
            if (n > 5 && !force) throw Error(ErrorKind::budget, "n > 5 exceeds the default budget; pass --force");
            json out;
            out["curve"] = curve;
            out["n"] = n;
            if (curve == "xn") {
                auto c = make_ctx({"w", "u", "v", "t"});
                DualCurve d = dual_of_xn(c, n, seed);
                out["polynomial"] = to_string(d.poly);
                out["degree"] = d.poly.total_degree();
                out["expected_degree"] = (n - 1) * (n - 1);
                json disc = json::array();
                for (auto& f : d.info.discarded) disc.push_back(to_string(f));
                out["discarded"] = disc;
            } else {
                auto c = make_ctx({"x", "y", "z", "u", "v", "w"});
                MPoly p = fermat_dual_poly(c, n);
                out["polynomial"] = to_string(p);
                out["degree"] = p.total_degree();
                out["expected_degree"] = n * (n - 1);
                out["discarded"] = json::array();
            }
            if (format == "json") {
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << out["polynomial"].get<std::string>() << "\n";
                std::cout << "degree: " << out["degree"] << "\n";
                std::cout << "expected degree: " << out["expected_degree"] << "\n";
                std::cout << "discarded factors:";
                if (out["discarded"].empty()) std::cout << " none";
                for (auto& f : out["discarded"]) std::cout << "\n  " << f.get<std::string>();
                std::cout << "\n";
            }
            return 0;
        }

        if (*suite) {
            if (!all && tag.empty()) throw Error(ErrorKind::usage, "suite needs --all or --tag");
            CheckOptions o;
            o.seed = seed;
            o.jobs = std::max(1u, jobs);
            o.fast = fast;
            bool ok = true;
            run_suite(suite_ids(all ? "all" : tag), o, [&](const Report& r) {
                std::cout << r.to_json().dump() << std::endl;
                summary(r);
                ok = ok && r.passed();
            });
            return ok ? 0 : 1;
        }
    } catch (const Error& e) {
        return report_error(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
