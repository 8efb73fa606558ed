#include "holo/strategies.hpp"

namespace holo {

std::string StrategyKind::name() const {
    switch (kind) {
        case Kind::known_distance: return "known";
        case Kind::random_distance:
            return include_correct ? "random-include" : "random-exclude";
        case Kind::non_weighted: return "non-weighted";
        case Kind::alternating: return "alternating";
        case Kind::reverse_attention: return "reverse-attention";
    }
    return "?";
}

StrategyKind StrategyKind::parse(const std::string& name) {
    if (name == "known") return {Kind::known_distance, true};
    if (name == "random-include") return {Kind::random_distance, true};
    if (name == "random-exclude") return {Kind::random_distance, false};
    if (name == "non-weighted") return {Kind::non_weighted, true};
    if (name == "alternating") return {Kind::alternating, true};
    if (name == "reverse-attention") return {Kind::reverse_attention, true};
    fail("unknown strategy '" + name +
         "' (expected known | random-include | random-exclude | non-weighted | alternating | "
         "reverse-attention)");
}

}  // namespace holo
