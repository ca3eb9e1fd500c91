#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "histloc/config.hpp"
#include "histloc/histories.hpp"
#include "histloc/infoloc.hpp"

namespace histloc::scenarios {

struct MiRow {
    std::string time;
    std::string m_variable;
    std::string carrier;
    int carrier_dim = 0;
    double mi_bits = 0.0;
};

struct Check {
    std::string claim_id;
    std::string citation;
    double expected = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    std::string op = "eq";  // eq | ge | le
    bool pass = false;
};

struct ScenarioReport {
    std::string scenario;
    std::string framework;
    std::vector<MiRow> mi_table;
    std::vector<Check> checks;
    nlohmann::ordered_json extra;  // scenario-specific sections

    bool all_pass() const;
};

/// The paper anchoring lives in data, not code: {id, citation, expected,
/// tolerance, op} loaded from the shipped registry (embedded at build time,
/// overridable from a file).
class ClaimRegistry {
  public:
    struct Entry {
        std::string citation;
        double expected = 0.0;
        double tolerance = 0.0;
        std::string op = "eq";
    };

    static const ClaimRegistry& builtin();
    static ClaimRegistry from_json(const nlohmann::json& j);
    static ClaimRegistry from_file(const std::string& path);

    /// Unknown ids yield a failing check (fail closed).
    Check evaluate(const std::string& id, double observed) const;
    std::vector<std::string> ids() const;

  private:
    std::map<std::string, Entry> entries_;
};

enum class DenseCodingFramework { F1, F2, F3 };
enum class TeleportationStructure { unitary_channel, computational, sx, contextual };

/// The three dense-coding framework families, ready for consistency checks
/// and probability queries.
histories::HistoryFamily dense_coding_family(DenseCodingFramework which);
/// F2 with a computational event for b appended at t8 (inconsistent).
histories::HistoryFamily dense_coding_f2_with_b_at_t8();
/// F3 with the S_x event for c at t7 replaced by a computational one
/// (inconsistent).
histories::HistoryFamily dense_coding_f3_with_c_at_t7();

ScenarioReport dense_coding_report(DenseCodingFramework which, const Config& config,
                                   const ClaimRegistry& registry = ClaimRegistry::builtin());
ScenarioReport teleportation_report(TeleportationStructure which, const Config& config,
                                    const ClaimRegistry& registry = ClaimRegistry::builtin());
ScenarioReport classical_slips_report(const Config& config,
                                      const ClaimRegistry& registry = ClaimRegistry::builtin());
ScenarioReport spin8_report(const Config& config,
                            const ClaimRegistry& registry = ClaimRegistry::builtin());
ScenarioReport retrocausality_report(const Config& config,
                                     const ClaimRegistry& registry = ClaimRegistry::builtin());
/// Asserts MI <= log2(carrier dim) over every MI row of the given reports.
ScenarioReport capacity_report(std::span<const ScenarioReport> reports, const Config& config,
                               const ClaimRegistry& registry = ClaimRegistry::builtin());
/// Dense coding with the preparation encoded in rotation angles; Heisenberg
/// dependence/accessibility verdicts side by side with the frameworks one.
ScenarioReport dh_dense_coding_report(const Config& config,
                                      const ClaimRegistry& registry = ClaimRegistry::builtin());

/// Known scenario names, in report order.
std::vector<std::string> scenario_names();

/// Runs one scenario by CLI name ("all" is not accepted here).
ScenarioReport run_scenario(const std::string& name, const Config& config,
                            const ClaimRegistry& registry = ClaimRegistry::builtin());

/// All scenarios in name order, capacity last (it consumes the others'
/// tables). Also fails closed on registry entries never observed.
std::vector<ScenarioReport> run_all(const Config& config,
                                    const ClaimRegistry& registry = ClaimRegistry::builtin());

nlohmann::ordered_json to_json(const ScenarioReport& r);
std::string to_text(const ScenarioReport& r);

}  // namespace histloc::scenarios
