#pragma once

#include <cstddef>
#include <vector>

namespace circreg {

enum class VariableKind {
    Linear,
    Circular,
};

// A regression dataset: paired predictors and responses with declared
// variable kinds. Values are checked finite at construction and circular
// variables are wrapped to [0, 2 pi).
class RegressionSample {
  public:
    static RegressionSample make(std::vector<double> predictors,
                                 std::vector<double> responses,
                                 VariableKind predictor_kind,
                                 VariableKind response_kind);

    std::size_t size() const { return predictors_.size(); }
    const std::vector<double>& predictors() const { return predictors_; }
    const std::vector<double>& responses() const { return responses_; }
    VariableKind predictor_kind() const { return predictor_kind_; }
    VariableKind response_kind() const { return response_kind_; }

    // Same predictors and kinds, new responses (wrapped when circular).
    // Used by the bootstrap, which resamples responses only.
    RegressionSample with_responses(std::vector<double> responses) const;

  private:
    RegressionSample() = default;

    std::vector<double> predictors_;
    std::vector<double> responses_;
    VariableKind predictor_kind_ = VariableKind::Linear;
    VariableKind response_kind_ = VariableKind::Linear;
};

// Two or more groups sharing variable kinds, for the curve-comparison
// tests. Groups keep their identity; pooled() concatenates them in group
// order when a single combined fit is needed.
class GroupedSample {
  public:
    static GroupedSample make(std::vector<RegressionSample> groups);

    std::size_t group_count() const { return groups_.size(); }
    const RegressionSample& group(std::size_t i) const { return groups_.at(i); }
    std::vector<std::size_t> group_sizes() const;
    std::size_t total_size() const;
    VariableKind predictor_kind() const { return groups_.front().predictor_kind(); }
    VariableKind response_kind() const { return groups_.front().response_kind(); }

    RegressionSample pooled() const;

    // Same structure and predictors, responses replaced group by group from
    // one flat vector laid out in group order.
    GroupedSample with_pooled_responses(const std::vector<double>& responses) const;

  private:
    GroupedSample() = default;

    std::vector<RegressionSample> groups_;
};

}  // namespace circreg
