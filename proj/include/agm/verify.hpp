#pragma once

// Executable checks of the counting identities, the multiplicity law, component
// fate and the taxonomy laws. Every check returns a report instead of throwing,
// except for precondition violations.

#include "agm/aquarium.hpp"
#include "agm/taxonomy.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace agm::verify {

enum class Status { Pass, Fail, Flagged, Inconclusive };
std::string to_string(Status s);

struct Report {
    std::string check;
    std::string field;
    Status status = Status::Pass;
    // Set when a compared quantity disagreed, including for flagged reports.
    bool discrepancy = false;
    std::vector<std::string> witnesses;
    nlohmann::json ledger = nlohmann::json::object();

    void fail(std::string witness);
    void flag(bool with_discrepancy);
    void inconclusive();
};

nlohmann::json to_json(const Report& r);

/// 0 when everything passed or was inconclusive, 1 on any failure, 3 when a
/// flagged report carries a discrepancy.
int exit_code(const std::vector<Report>& reports);

/// Integers s with s^2 <= 4q and s = q+1 mod m, ascending.
std::vector<std::int64_t> traces_in_range(std::uint64_t q, std::int64_t m);

/// (q-1)(q-5)/2 against the Hurwitz sum and a direct count of vertices with
/// parents. When A is given its parent lists are counted as well.
Report check_identity(const ff::Field& F, const aq::Aquarium* A = nullptr);

/// Distinct j-invariants of E_{alpha^2} with trace s against H((4q-s^2)/4).
Report check_M_s(const ff::Field& F, std::int64_t s);
/// The same restricted to 1 - alpha^2 square, against H((4q-s^2)/16).
Report check_N_s(const ff::Field& F, std::int64_t s);

Report check_multiplicity(const aq::Aquarium& A, const tax::Decomposition& d);

struct FateOptions {
    unsigned m_max = 4;
    std::uint64_t component_cap = 2'000'000;
    std::uint64_t max_field_order = std::uint64_t{1} << 22;
};

Report check_fate(const ff::Field& F, const aq::Vertex& P, const FateOptions& opts = {});

Report check_isogeny_edges(const aq::Aquarium& A, std::uint64_t sample, std::uint64_t seed = 0x5eed);

Report check_bounds(const aq::Aquarium& A, const tax::Decomposition& d);

inline constexpr std::uint64_t kSupersingularScanLimit = 4096;

Report check_taxonomy(const aq::Aquarium& A, const tax::Decomposition& d);

}  // namespace agm::verify
