#include "gazeforge/sequence.hpp"

#include <sstream>
#include <unordered_map>

#include "gazeforge/error.hpp"

namespace gazeforge {

namespace {

constexpr std::array<MovementLabel, 3> kMovementTypes{MovementLabel::Fixation, MovementLabel::Saccade,
                                                      MovementLabel::SmoothPursuit};

// Depth of the feasibility search equals the sequence length.
constexpr std::size_t kMaxConstrainedLength = 20000;

std::size_t type_index(MovementLabel label) { return static_cast<std::size_t>(label); }

bool is_movement(MovementLabel label) { return label != MovementLabel::Noise; }

bool pair_allowed(const OrderingRule& rule, std::optional<MovementLabel> prev, MovementLabel next) {
    if (rule.kind == OrderingRule::Kind::AfterEach) {
        return !(prev && *prev == rule.first) || next == rule.second;
    }
    return next != rule.second || (prev && *prev == rule.first);
}

bool end_allowed(const OrderingRule& rule, std::optional<MovementLabel> last) {
    return rule.kind != OrderingRule::Kind::AfterEach || !(last && *last == rule.first);
}

// Exact completion check over (remaining counts, last type), memoised.
class Planner {
public:
    Planner(const std::vector<OrderingRule>& rules, bool counted) : rules_(rules), counted_(counted) {}

    bool allowed(std::optional<MovementLabel> prev, MovementLabel next) const {
        for (const auto& r : rules_) {
            if (!pair_allowed(r, prev, next)) return false;
        }
        return true;
    }

    bool end_ok(std::optional<MovementLabel> last) const {
        for (const auto& r : rules_) {
            if (!end_allowed(r, last)) return false;
        }
        return true;
    }

    // In length mode only remaining[0] is used, as the number of free slots.
    bool feasible(const MovementCounts& remaining, std::optional<MovementLabel> last) {
        if (rules_.empty()) return true;
        const std::size_t left = counted_ ? remaining[0] + remaining[1] + remaining[2] : remaining[0];
        if (left == 0) return end_ok(last);

        const std::uint64_t key = pack(remaining, last);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        bool ok = false;
        for (MovementLabel t : kMovementTypes) {
            if (counted_ && remaining[type_index(t)] == 0) continue;
            if (!allowed(last, t)) continue;
            if (feasible(take(remaining, t), t)) {
                ok = true;
                break;
            }
        }
        memo_.emplace(key, ok);
        return ok;
    }

    MovementCounts take(MovementCounts remaining, MovementLabel t) const {
        if (counted_) {
            --remaining[type_index(t)];
        } else {
            --remaining[0];
        }
        return remaining;
    }

private:
    static std::uint64_t pack(const MovementCounts& c, std::optional<MovementLabel> last) {
        const std::uint64_t tag = last ? 1 + type_index(*last) : 0;
        return (static_cast<std::uint64_t>(c[0]) << 42) | (static_cast<std::uint64_t>(c[1]) << 22) |
               (static_cast<std::uint64_t>(c[2]) << 2) | tag;
    }

    const std::vector<OrderingRule>& rules_;
    bool counted_;
    std::unordered_map<std::uint64_t, bool> memo_;
};

void validate_rules(const std::vector<OrderingRule>& rules) {
    for (const auto& r : rules) {
        if (r.first == r.second) {
            throw ParameterError("sequence rule " + r.describe() + ": the two types must differ");
        }
        if (!is_movement(r.first) || !is_movement(r.second)) {
            throw ParameterError("sequence rule " + r.describe() + ": noise cannot be ordered");
        }
    }
}

[[noreturn]] void throw_unsatisfiable(const std::vector<OrderingRule>& rules, const MovementCounts& start,
                                      bool counted) {
    for (const auto& r : rules) {
        const std::vector<OrderingRule> single{r};
        Planner alone(single, counted);
        if (!alone.feasible(start, std::nullopt)) {
            throw ConstraintError("sequence rule " + r.describe() + " cannot be satisfied with the given counts");
        }
    }
    std::ostringstream os;
    os << "sequence rules cannot be satisfied together:";
    for (const auto& r : rules) os << ' ' << r.describe();
    throw ConstraintError(os.str());
}

}  // namespace

std::string OrderingRule::describe() const {
    std::ostringstream os;
    os << (kind == Kind::AfterEach ? "after_each(" : "before(") << label_name(first) << ", " << label_name(second)
       << ")";
    return os.str();
}

std::optional<std::size_t> first_violated_rule(const std::vector<MovementLabel>& sequence,
                                                const std::vector<OrderingRule>& rules) {
    for (std::size_t r = 0; r < rules.size(); ++r) {
        std::optional<MovementLabel> prev;
        for (MovementLabel next : sequence) {
            if (!pair_allowed(rules[r], prev, next)) return r;
            prev = next;
        }
        if (!end_allowed(rules[r], prev)) return r;
    }
    return std::nullopt;
}

std::vector<MovementLabel> build_sequence(const SequenceSpec& spec, RandomSource& rng) {
    validate_rules(spec.rules);

    if (!spec.explicit_sequence.empty()) {
        for (MovementLabel l : spec.explicit_sequence) {
            if (!is_movement(l)) throw ParameterError("sequence.explicit: noise is not a movement type");
        }
        if (auto r = first_violated_rule(spec.explicit_sequence, spec.rules)) {
            throw ConstraintError("sequence.explicit violates rule " + spec.rules[*r].describe());
        }
        return spec.explicit_sequence;
    }

    const bool counted = spec.total() > 0;
    const std::size_t total = counted ? spec.total() : spec.length;
    if (total == 0) {
        throw ParameterError("sequence: empty spec (set counts, length or explicit)");
    }
    if (!spec.rules.empty() && total > kMaxConstrainedLength) {
        throw ParameterError("sequence: constrained sequences are limited to " +
                             std::to_string(kMaxConstrainedLength) + " movements");
    }

    MovementCounts remaining = counted ? spec.counts : MovementCounts{spec.length, 0, 0};
    Planner planner(spec.rules, counted);
    if (!planner.feasible(remaining, std::nullopt)) {
        throw_unsatisfiable(spec.rules, remaining, counted);
    }

    std::vector<MovementLabel> out;
    out.reserve(total);
    std::optional<MovementLabel> prev;
    for (std::size_t pos = 0; pos < total; ++pos) {
        std::array<double, 3> weight{0.0, 0.0, 0.0};
        double sum = 0.0;
        std::size_t candidates = 0;
        MovementLabel only = MovementLabel::Fixation;
        for (MovementLabel t : kMovementTypes) {
            const double w = counted ? static_cast<double>(remaining[type_index(t)]) : 1.0;
            if (w <= 0.0) continue;
            if (!planner.allowed(prev, t)) continue;
            if (!planner.feasible(planner.take(remaining, t), t)) continue;
            weight[type_index(t)] = w;
            sum += w;
            ++candidates;
            only = t;
        }
        if (candidates == 0) {
            // Unreachable once the start state is feasible.
            throw_unsatisfiable(spec.rules, remaining, counted);
        }

        MovementLabel chosen = only;
        if (candidates > 1) {
            double u = rng.uniform() * sum;
            for (MovementLabel t : kMovementTypes) {
                const double w = weight[type_index(t)];
                if (w <= 0.0) continue;
                chosen = t;
                if (u < w) break;
                u -= w;
            }
        }
        out.push_back(chosen);
        remaining = planner.take(remaining, chosen);
        prev = chosen;
    }
    return out;
}

}  // namespace gazeforge
