#include "circreg/sample.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "circreg/angles.hpp"
#include "circreg/errors.hpp"

namespace circreg {

namespace {

void check_finite(const std::vector<double>& values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InvalidInputError(std::string(what) + " must be finite");
        }
    }
}

void wrap_if_circular(std::vector<double>& values, VariableKind kind) {
    if (kind == VariableKind::Circular) {
        for (double& v : values) {
            v = wrap_angle(v);
        }
    }
}

}  // namespace

RegressionSample RegressionSample::make(std::vector<double> predictors,
                                        std::vector<double> responses,
                                        VariableKind predictor_kind,
                                        VariableKind response_kind) {
    if (predictors.empty()) {
        throw InvalidInputError("RegressionSample: no observations");
    }
    if (predictors.size() != responses.size()) {
        throw InvalidInputError("RegressionSample: predictor/response length mismatch");
    }
    check_finite(predictors, "predictors");
    check_finite(responses, "responses");
    wrap_if_circular(predictors, predictor_kind);
    wrap_if_circular(responses, response_kind);

    RegressionSample s;
    s.predictors_ = std::move(predictors);
    s.responses_ = std::move(responses);
    s.predictor_kind_ = predictor_kind;
    s.response_kind_ = response_kind;
    return s;
}

RegressionSample RegressionSample::with_responses(std::vector<double> responses) const {
    if (responses.size() != size()) {
        throw InvalidInputError("RegressionSample::with_responses: length mismatch");
    }
    check_finite(responses, "responses");
    wrap_if_circular(responses, response_kind_);

    RegressionSample s;
    s.predictors_ = predictors_;
    s.responses_ = std::move(responses);
    s.predictor_kind_ = predictor_kind_;
    s.response_kind_ = response_kind_;
    return s;
}

GroupedSample GroupedSample::make(std::vector<RegressionSample> groups) {
    if (groups.size() < 2) {
        throw InvalidInputError("GroupedSample: need at least two groups");
    }
    for (const auto& g : groups) {
        if (g.size() < 3) {
            throw TooFewObservationsError("GroupedSample: each group needs at least 3 observations");
        }
        if (g.predictor_kind() != groups.front().predictor_kind() ||
            g.response_kind() != groups.front().response_kind()) {
            throw InvalidInputError("GroupedSample: groups must share variable kinds");
        }
    }
    GroupedSample s;
    s.groups_ = std::move(groups);
    return s;
}

std::vector<std::size_t> GroupedSample::group_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(groups_.size());
    for (const auto& g : groups_) {
        sizes.push_back(g.size());
    }
    return sizes;
}

std::size_t GroupedSample::total_size() const {
    std::size_t n = 0;
    for (const auto& g : groups_) {
        n += g.size();
    }
    return n;
}

RegressionSample GroupedSample::pooled() const {
    std::vector<double> predictors;
    std::vector<double> responses;
    predictors.reserve(total_size());
    responses.reserve(total_size());
    for (const auto& g : groups_) {
        predictors.insert(predictors.end(), g.predictors().begin(), g.predictors().end());
        responses.insert(responses.end(), g.responses().begin(), g.responses().end());
    }
    return RegressionSample::make(std::move(predictors), std::move(responses),
                                  predictor_kind(), response_kind());
}

GroupedSample GroupedSample::with_pooled_responses(const std::vector<double>& responses) const {
    if (responses.size() != total_size()) {
        throw InvalidInputError("GroupedSample::with_pooled_responses: length mismatch");
    }
    std::vector<RegressionSample> out;
    out.reserve(groups_.size());
    std::size_t offset = 0;
    for (const auto& g : groups_) {
        std::vector<double> slice(responses.begin() + offset,
                                  responses.begin() + offset + g.size());
        out.push_back(g.with_responses(std::move(slice)));
        offset += g.size();
    }
    GroupedSample s;
    s.groups_ = std::move(out);
    return s;
}

}  // namespace circreg
