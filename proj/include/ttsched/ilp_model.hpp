#pragma once

#include "ttsched/tseg.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ttsched {

enum class VarType { Binary, Integer };

/// Decision variable. Transmission variables x_i_j_q_k and Z_k are binary;
/// waiting variables x_i_i_q_k count frames held at node i across the edge
/// leaving i_q and are integers in [0, upper].
struct LpVar {
    std::string name;
    VarType type = VarType::Binary;
    std::int64_t upper = 1;

    bool operator==(const LpVar&) const = default;
};

struct LpTerm {
    std::int64_t coef = 1;
    std::size_t var = 0;

    bool operator==(const LpTerm&) const = default;
};

enum class Sense { LessEq, Equal, GreaterEq };

/// Constraint row; `family` is 1..7 after the constraint family it belongs to.
struct LpRow {
    std::string name;
    int family = 0;
    std::vector<LpTerm> terms;
    Sense sense = Sense::LessEq;
    std::int64_t rhs = 0;

    bool operator==(const LpRow&) const = default;
};

/// Maximize the number of fully scheduled flows over the free copies of one
/// expanded graph. Variable order: per flow its transmission variables, then
/// all Z_k, then per flow its waiting variables.
struct IlpModel {
    std::vector<LpVar> vars;
    std::vector<LpRow> rows;
    std::vector<std::size_t> objective; // coefficient 1 each

    std::size_t family_count(int family) const;
    bool operator==(const IlpModel&) const = default;
};

/// Builds the model for `flows` against the current occupancy of `tseg`.
IlpModel build_model(const Tseg& tseg, std::span<const FlowRequest> flows);

/// Size of the model predicted from the instance parameters alone.
struct ModelSize {
    std::size_t vars = 0;
    std::size_t rows = 0;
    std::size_t per_family[8] = {}; // index 1..7
};
ModelSize closed_form_size(std::size_t nodes, std::size_t free_copies, int hyper_period,
                           std::span<const FlowRequest> flows);

/// CPLEX LP text: Maximize / Subject To / Bounds / Binary / General / End.
std::string export_lp(const IlpModel& model);

/// Reads text produced by export_lp back into a model. Throws ParseError.
IlpModel parse_lp(std::string_view text);

} // namespace ttsched
