#pragma once

#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <nlohmann/json_fwd.hpp>

#include "histloc/infoloc.hpp"

namespace histloc::classical {

using Rational = boost::rational<long long>;

/// Joint pmf with exact probabilities. The calibration anchors (slip models,
/// eight-state spin model) must come out at exactly 1 bit, so these tables
/// never go through floating point until the final conversion.
struct ExactJoint {
    std::vector<std::string> m_labels;
    std::vector<std::string> n_labels;
    std::vector<std::vector<Rational>> pmf;
};

void validate_exact(const ExactJoint& j);

struct ExactBits {
    double bits = 0.0;
    bool exact = false;  // true when every log factor was a power of two
};

/// Mutual information in bits. When every likelihood ratio
/// p(m,n)/(p(m)p(n)) is a power of two the result is computed in rational
/// arithmetic and is exact; otherwise it falls back to floating point.
ExactBits exact_mutual_information(const ExactJoint& j);
/// Entropy of the N marginal; exact when all marginal masses are powers of two.
ExactBits exact_outcome_entropy(const ExactJoint& j);
/// H(N|M); exact under the same condition on the conditional masses.
ExactBits exact_conditional_entropy(const ExactJoint& j);

infoloc::JointDistribution to_joint(const ExactJoint& j);
nlohmann::ordered_json to_json(const ExactJoint& j);

enum class SlipKind { single, pair_correlation, shared_key, charlie_four };

SlipKind slip_kind_from_name(const std::string& name);
std::string slip_kind_name(SlipKind kind);

/// A colored-slip encoding: message variable plus one or more slip
/// variables with an exact joint table.
struct SlipModel {
    SlipKind kind = SlipKind::single;
    std::vector<std::string> m_labels;
    std::vector<std::string> slip_names;
    struct Row {
        int m = 0;
        std::vector<std::string> slips;  // one color per slip
        Rational p;
    };
    std::vector<Row> rows;
};

SlipModel build_slip_model(SlipKind kind);

/// Joint of the message with the listed slips (indices into slip_names).
ExactJoint slip_joint(const SlipModel& model, const std::vector<int>& slip_subset);

/// Spinning-object model: six polarizer settings, eight spin configurations,
/// each setting fixing one axis and randomizing the other two.
struct Spin8Model {
    std::vector<std::string> settings;            // 6, prior 1/6 each
    std::vector<std::string> configs;             // 8, (±,±,±)
    std::vector<std::vector<Rational>> conditional;  // settings x configs
};

Spin8Model spin8_model();
ExactJoint spin8_exact_joint();
infoloc::JointDistribution spin8_joint();

}  // namespace histloc::classical
