#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gazeforge/core.hpp"

namespace gazeforge {

/// Adjacency constraint between two movement types.
///  - AfterEach(A, B): every A is immediately followed by B.
///  - Before(A, B):    every B is immediately preceded by A.
struct OrderingRule {
    enum class Kind { AfterEach, Before };
    Kind kind = Kind::AfterEach;
    MovementLabel first = MovementLabel::Fixation;
    MovementLabel second = MovementLabel::Saccade;

    static OrderingRule after_each(MovementLabel a, MovementLabel b) { return {Kind::AfterEach, a, b}; }
    static OrderingRule before(MovementLabel a, MovementLabel b) { return {Kind::Before, a, b}; }

    std::string describe() const;

    friend bool operator==(const OrderingRule&, const OrderingRule&) = default;
};

/// Counts indexed by Fixation, Saccade, SmoothPursuit.
using MovementCounts = std::array<std::size_t, 3>;

struct SequenceSpec {
    /// Target quantity of each type. When all zero and `explicit_sequence` is
    /// empty, `length` movements are drawn with equal probability instead.
    MovementCounts counts{0, 0, 0};
    std::size_t length = 0;
    std::vector<OrderingRule> rules;
    std::vector<MovementLabel> explicit_sequence;

    std::size_t total() const { return counts[0] + counts[1] + counts[2]; }
};

/// Index of the first rule `sequence` breaks, if any.
std::optional<std::size_t> first_violated_rule(const std::vector<MovementLabel>& sequence,
                                                const std::vector<OrderingRule>& rules);

/// Builds the movement sequence for a run.
///
/// At every position the next type is drawn with probability proportional to
/// its remaining quantity (or 1/3 each in length mode). Types whose choice
/// would break a rule, or leave a remainder that no ordering can complete,
/// are excluded from the draw; when a rule forces the next type it is
/// inserted directly.
///
/// Throws ParameterError for an empty spec and ConstraintError naming the
/// offending rule when the rules cannot be met.
std::vector<MovementLabel> build_sequence(const SequenceSpec& spec, RandomSource& rng);

}  // namespace gazeforge
