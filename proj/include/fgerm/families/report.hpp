#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fgerm::families
{

enum class Status { pass, fail, unstable };

inline std::string to_string(Status s)
{
    switch (s) {
    case Status::pass:
        return "pass";
    case Status::fail:
        return "fail";
    case Status::unstable:
        return "unstable";
    }
    return "fail";
}

/// Outcome of one checkable claim. A failing equality claim carries the
/// offending value in `witness`.
struct VerificationReport {
    std::string claim_id;
    nlohmann::json parameters = nlohmann::json::object();
    Status status = Status::fail;
    std::optional<std::string> witness;
    std::vector<std::string> notes;
    std::chrono::nanoseconds elapsed{0};

    bool passed() const noexcept
    {
        return status == Status::pass;
    }
};

inline constexpr int report_schema_version = 1;

inline nlohmann::json to_json(const VerificationReport &r, bool with_timing = false)
{
    nlohmann::json j;
    j["claim_id"] = r.claim_id;
    j["parameters"] = r.parameters;
    j["status"] = to_string(r.status);
    j["witness"] = r.witness ? nlohmann::json(*r.witness) : nlohmann::json(nullptr);
    if (!r.notes.empty()) {
        j["notes"] = r.notes;
    }
    if (with_timing) {
        j["elapsed_ms"] = std::chrono::duration<double, std::milli>(r.elapsed).count();
    }
    return j;
}

inline std::string to_text(const VerificationReport &r, bool with_timing = false)
{
    std::string out = to_string(r.status) + "  " + r.claim_id + "  " + r.parameters.dump();
    if (with_timing) {
        out += "  (" + std::to_string(std::chrono::duration<double>(r.elapsed).count()) + " s)";
    }
    if (r.witness) {
        out += "\n    witness: " + *r.witness;
    }
    for (const auto &n : r.notes) {
        out += "\n    note: " + n;
    }
    return out;
}

/// Reports sorted by claim id, then by parameters, so that emission order
/// does not depend on scheduling.
inline void canonical_order(std::vector<VerificationReport> &reports)
{
    std::stable_sort(reports.begin(), reports.end(), [](const auto &a, const auto &b) {
        if (a.claim_id != b.claim_id) {
            return a.claim_id < b.claim_id;
        }
        return a.parameters.dump() < b.parameters.dump();
    });
}

/// Runs `check` (returning status and optional witness) and times it.
template <typename Check>
VerificationReport run_claim(std::string claim_id, nlohmann::json parameters, Check check)
{
    VerificationReport r;
    r.claim_id = std::move(claim_id);
    r.parameters = std::move(parameters);
    const auto t0 = std::chrono::steady_clock::now();
    check(r);
    r.elapsed = std::chrono::steady_clock::now() - t0;
    return r;
}

inline bool all_passed(const std::vector<VerificationReport> &reports)
{
    return std::all_of(reports.begin(), reports.end(), [](const auto &r) { return r.passed(); });
}

} // namespace fgerm::families
