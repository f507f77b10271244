#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "subset.hpp"

namespace flatforge {

// A lemma was invoked on input that violates its hypotheses. Carries the
// offending set when there is one.
class HypothesisError : public std::invalid_argument {
public:
    explicit HypothesisError(const std::string& what, std::optional<Subset> violating = std::nullopt)
        : std::invalid_argument(what), violating_(std::move(violating)) {}
    const std::optional<Subset>& violating() const { return violating_; }

private:
    std::optional<Subset> violating_;
};

// Search refused because the instance is beyond the supported scale.
class ScaleRefusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace flatforge
