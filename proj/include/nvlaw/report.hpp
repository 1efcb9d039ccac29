#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace nvlaw {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "nvlaw.report/1";
inline constexpr std::uint64_t kDefaultSeed = 0xB0C57ABEull;

struct Report {
    std::string check;
    json params = json::object();
    std::string status = "pass";
    std::optional<double> max_error;
    json witness;
    std::uint64_t seed = kDefaultSeed;
    std::int64_t runtime_ms = 0;
    std::string citation;
    json details = json::object();

    bool passed() const { return status == "pass"; }

    // Records a violated assertion; the first witness is kept.
    void fail(const std::string& what, json w = nullptr) {
        status = "fail";
        if (witness.is_null()) {
            witness = json::object();
            witness["failure"] = what;
            if (!w.is_null()) witness["input"] = std::move(w);
        }
        details["failures"].push_back(what);
    }

    void expect(bool ok, const std::string& what, json w = nullptr) {
        if (!ok) fail(what, std::move(w));
    }

    void bump_error(double e) {
        if (!max_error || e > *max_error || std::isnan(e)) max_error = e;
    }

    json to_json() const {
        json j;
        j["schema"] = kReportSchema;
        j["check"] = check;
        j["params"] = params;
        j["status"] = status;
        j["max_error"] = max_error ? json(*max_error) : json(nullptr);
        j["witness"] = witness;
        j["seed"] = seed;
        j["runtime_ms"] = runtime_ms;
        j["citation"] = citation;
        j["details"] = details;
        return j;
    }
};

class Stopwatch {
public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    std::int64_t ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

}  // namespace nvlaw
