#include "histloc/classical.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace histloc::classical {

namespace {

const Rational kZero{0};

bool power_of_two_log(long long v, int& log) {
    if (v <= 0) return false;
    log = 0;
    while (v > 1) {
        if (v % 2 != 0) return false;
        v /= 2;
        ++log;
    }
    return true;
}

// log2 of a rational when numerator and denominator are both powers of two.
bool dyadic_log2(const Rational& r, int& log) {
    int ln = 0, ld = 0;
    if (!power_of_two_log(r.numerator(), ln) || !power_of_two_log(r.denominator(), ld)) return false;
    log = ln - ld;
    return true;
}

double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace

void validate_exact(const ExactJoint& j) {
    if (j.pmf.size() != j.m_labels.size()) throw std::invalid_argument("exact joint: row mismatch");
    Rational sum{0};
    for (const auto& row : j.pmf) {
        if (row.size() != j.n_labels.size()) throw std::invalid_argument("exact joint: column mismatch");
        for (const Rational& p : row) {
            if (p < kZero) throw std::invalid_argument("exact joint: negative probability");
            sum += p;
        }
    }
    if (sum != Rational{1}) throw std::invalid_argument("exact joint: pmf does not sum to 1");
}

ExactBits exact_mutual_information(const ExactJoint& j) {
    validate_exact(j);
    std::vector<Rational> pm(j.m_labels.size(), kZero), pn(j.n_labels.size(), kZero);
    for (std::size_t m = 0; m < j.pmf.size(); ++m)
        for (std::size_t n = 0; n < j.pmf[m].size(); ++n) {
            pm[m] += j.pmf[m][n];
            pn[n] += j.pmf[m][n];
        }

    Rational exact_sum{0};
    double float_sum = 0.0;
    bool all_exact = true;
    for (std::size_t m = 0; m < j.pmf.size(); ++m)
        for (std::size_t n = 0; n < j.pmf[m].size(); ++n) {
            const Rational& p = j.pmf[m][n];
            if (p == kZero) continue;
            const Rational ratio = p / (pm[m] * pn[n]);
            int log = 0;
            if (dyadic_log2(ratio, log)) {
                exact_sum += p * Rational{log};
            } else {
                all_exact = false;
                float_sum += to_double(p) * std::log2(to_double(ratio));
            }
        }
    return ExactBits{to_double(exact_sum) + float_sum, all_exact};
}

namespace {

ExactBits entropy_of(const std::vector<Rational>& masses) {
    Rational exact_sum{0};
    double float_sum = 0.0;
    bool all_exact = true;
    for (const Rational& p : masses) {
        if (p == kZero) continue;
        int log = 0;
        if (dyadic_log2(p, log)) {
            exact_sum -= p * Rational{log};
        } else {
            all_exact = false;
            float_sum -= to_double(p) * std::log2(to_double(p));
        }
    }
    return ExactBits{to_double(exact_sum) + float_sum, all_exact};
}

}  // namespace

ExactBits exact_outcome_entropy(const ExactJoint& j) {
    validate_exact(j);
    std::vector<Rational> pn(j.n_labels.size(), kZero);
    for (const auto& row : j.pmf)
        for (std::size_t n = 0; n < row.size(); ++n) pn[n] += row[n];
    return entropy_of(pn);
}

ExactBits exact_conditional_entropy(const ExactJoint& j) {
    validate_exact(j);
    // H(N|M) = sum_m p(m) H(N|M=m); conditionals p(n|m) stay rational.
    Rational exact_sum{0};
    double float_sum = 0.0;
    bool all_exact = true;
    for (const auto& row : j.pmf) {
        Rational pm{0};
        for (const Rational& p : row) pm += p;
        if (pm == kZero) continue;
        for (const Rational& p : row) {
            if (p == kZero) continue;
            const Rational cond = p / pm;
            int log = 0;
            if (dyadic_log2(cond, log)) {
                exact_sum -= p * Rational{log};
            } else {
                all_exact = false;
                float_sum -= to_double(p) * std::log2(to_double(cond));
            }
        }
    }
    return ExactBits{to_double(exact_sum) + float_sum, all_exact};
}

infoloc::JointDistribution to_joint(const ExactJoint& j) {
    validate_exact(j);
    infoloc::JointDistribution out;
    out.m_labels = j.m_labels;
    out.n_labels = j.n_labels;
    out.pmf = Eigen::MatrixXd::Zero(j.m_labels.size(), j.n_labels.size());
    for (std::size_t m = 0; m < j.pmf.size(); ++m)
        for (std::size_t n = 0; n < j.pmf[m].size(); ++n)
            out.pmf(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = to_double(j.pmf[m][n]);
    return out;
}

nlohmann::ordered_json to_json(const ExactJoint& j) {
    nlohmann::ordered_json out;
    out["m_labels"] = j.m_labels;
    out["n_labels"] = j.n_labels;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : j.pmf) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const Rational& p : row)
            r.push_back(std::to_string(p.numerator()) + "/" + std::to_string(p.denominator()));
        rows.push_back(r);
    }
    out["pmf"] = rows;
    return out;
}

SlipKind slip_kind_from_name(const std::string& name) {
    if (name == "single") return SlipKind::single;
    if (name == "pair_correlation") return SlipKind::pair_correlation;
    if (name == "shared_key") return SlipKind::shared_key;
    if (name == "charlie_four") return SlipKind::charlie_four;
    throw std::invalid_argument("unknown slip model kind: " + name);
}

std::string slip_kind_name(SlipKind kind) {
    switch (kind) {
        case SlipKind::single: return "single";
        case SlipKind::pair_correlation: return "pair_correlation";
        case SlipKind::shared_key: return "shared_key";
        case SlipKind::charlie_four: return "charlie_four";
    }
    throw std::logic_error("unknown slip kind");
}

SlipModel build_slip_model(SlipKind kind) {
    SlipModel model;
    model.kind = kind;
    model.m_labels = {"0", "1"};
    const Rational half{1, 2}, quarter{1, 4}, eighth{1, 8};

    switch (kind) {
        case SlipKind::single:
            // one slip: red encodes 0, green encodes 1
            model.slip_names = {"slip"};
            model.rows = {{0, {"R"}, half}, {1, {"G"}, half}};
            break;

        case SlipKind::pair_correlation:
            // matching colors encode 0, opposite colors encode 1
            model.slip_names = {"slip1", "slip2"};
            model.rows = {{0, {"R", "R"}, quarter},
                          {0, {"G", "G"}, quarter},
                          {1, {"R", "G"}, quarter},
                          {1, {"G", "R"}, quarter}};
            break;

        case SlipKind::shared_key: {
            // Alice and Bob share a random color; Alice mails the same color
            // for 0, the opposite color for 1. Slips: the one in transit and
            // the one already with Bob.
            model.slip_names = {"transit", "bob"};
            model.rows = {{0, {"R", "R"}, quarter},
                          {0, {"G", "G"}, quarter},
                          {1, {"G", "R"}, quarter},
                          {1, {"R", "G"}, quarter}};
            break;
        }

        case SlipKind::charlie_four: {
            // Charlie deals Alice and Bob one of RR, GG, RG, GR. Alice mails
            // her color for 0, the opposite for 1; Charlie mails yellow if
            // the dealt pair matched, blue otherwise.
            model.slip_names = {"alice", "charlie", "bob"};
            const char* colors = "RG";
            for (int dealt_a = 0; dealt_a < 2; ++dealt_a)
                for (int dealt_b = 0; dealt_b < 2; ++dealt_b)
                    for (int m = 0; m < 2; ++m) {
                        const int sent = dealt_a ^ m;
                        const std::string charlie = dealt_a == dealt_b ? "Y" : "B";
                        model.rows.push_back({m,
                                              {std::string(1, colors[sent]), charlie,
                                               std::string(1, colors[dealt_b])},
                                              eighth});
                    }
            break;
        }
    }
    return model;
}

ExactJoint slip_joint(const SlipModel& model, const std::vector<int>& slip_subset) {
    if (slip_subset.empty()) throw std::invalid_argument("slip_joint: empty slip subset");
    for (int s : slip_subset)
        if (s < 0 || s >= static_cast<int>(model.slip_names.size()))
            throw std::out_of_range("slip_joint: slip index out of range");

    std::map<std::string, int> n_index;
    ExactJoint joint;
    joint.m_labels = model.m_labels;
    std::vector<std::pair<std::pair<int, int>, Rational>> mass;
    for (const auto& row : model.rows) {
        std::string key;
        for (int s : slip_subset) {
            if (!key.empty()) key += ",";
            key += row.slips[s];
        }
        if (!n_index.count(key)) {
            n_index[key] = static_cast<int>(joint.n_labels.size());
            joint.n_labels.push_back(key);
        }
        mass.push_back({{row.m, n_index[key]}, row.p});
    }
    joint.pmf.assign(joint.m_labels.size(), std::vector<Rational>(joint.n_labels.size(), kZero));
    for (const auto& [mn, p] : mass) joint.pmf[mn.first][mn.second] += p;
    validate_exact(joint);
    return joint;
}

Spin8Model spin8_model() {
    Spin8Model model;
    const char axes[3] = {'x', 'y', 'z'};
    for (char axis : axes)
        for (const char* sign : {"+", "-"})
            model.settings.push_back(std::string("S") + axis + sign);
    for (int cfg = 0; cfg < 8; ++cfg) {
        std::string label = "(";
        for (int axis = 0; axis < 3; ++axis) {
            label += (cfg >> (2 - axis)) & 1 ? '-' : '+';
            label += axis < 2 ? ',' : ')';
        }
        model.configs.push_back(label);
    }
    // each setting pins one axis and randomizes the other two
    model.conditional.assign(6, std::vector<Rational>(8, kZero));
    for (int setting = 0; setting < 6; ++setting) {
        const int axis = setting / 2;
        const int sign = setting % 2;
        for (int cfg = 0; cfg < 8; ++cfg)
            if (((cfg >> (2 - axis)) & 1) == sign) model.conditional[setting][cfg] = Rational{1, 4};
    }
    return model;
}

ExactJoint spin8_exact_joint() {
    const Spin8Model model = spin8_model();
    ExactJoint joint;
    joint.m_labels = model.settings;
    joint.n_labels = model.configs;
    joint.pmf.assign(6, std::vector<Rational>(8, kZero));
    const Rational prior{1, 6};
    for (int s = 0; s < 6; ++s)
        for (int c = 0; c < 8; ++c) joint.pmf[s][c] = prior * model.conditional[s][c];
    validate_exact(joint);
    return joint;
}

infoloc::JointDistribution spin8_joint() { return to_joint(spin8_exact_joint()); }

}  // namespace histloc::classical
