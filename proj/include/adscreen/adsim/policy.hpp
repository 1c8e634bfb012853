#pragma once

#include "adscreen/adsim/population.hpp"
#include "adscreen/common/rng.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace adscreen::adsim {

enum class LearnerKind { online_logistic, thompson_beta_segments, random_baseline };

std::string_view to_string(LearnerKind k);
std::optional<LearnerKind> parse_learner_kind(std::string_view text);

struct LearnerSpec {
    LearnerKind kind = LearnerKind::online_logistic;
    double epsilon = 0.1; // fraction of impressions chosen at random
    // online_logistic
    double learning_rate = 0.05;
    std::size_t epochs = 5;
    double l2 = 1e-4;
    // thompson_beta_segments
    std::size_t segments = 10;
    double prior_alpha = 1.0;
    double prior_beta = 1.0;
};

void validate(const LearnerSpec& spec);

struct Observation {
    std::size_t user = 0;
    bool converted = false;
};

// Targeting model: maps a user to an impression priority and learns from
// the day's clickers.
class Policy {
public:
    virtual ~Policy() = default;
    virtual void begin_day(Rng& rng) { (void)rng; }
    virtual double priority(const SimUser& u, Rng& rng) const = 0;
    virtual void update(const std::vector<Observation>& day, const Population& pop) = 0;
    virtual nlohmann::json snapshot() const = 0;
};

// Logistic regression on the user features, trained by SGD on each day's
// batch only.
class OnlineLogistic final : public Policy {
public:
    OnlineLogistic(const LearnerSpec& spec, std::size_t n_features);
    double priority(const SimUser& u, Rng& rng) const override;
    void update(const std::vector<Observation>& day, const Population& pop) override;
    nlohmann::json snapshot() const override;

    const std::vector<double>& weights() const { return w_; }
    double bias() const { return b_; }

private:
    LearnerSpec spec_;
    std::vector<double> w_;
    double b_ = 0.0;
};

// Users are bucketed by quantiles of their feature sum; each bucket keeps a
// Beta posterior on its conversion rate, sampled once per day.
class ThompsonSegments final : public Policy {
public:
    ThompsonSegments(const LearnerSpec& spec, const Population& pop);
    void begin_day(Rng& rng) override;
    double priority(const SimUser& u, Rng& rng) const override;
    void update(const std::vector<Observation>& day, const Population& pop) override;
    nlohmann::json snapshot() const override;

    std::size_t segment_of(const SimUser& u) const;

private:
    LearnerSpec spec_;
    std::vector<double> edges_; // segments - 1 ascending cut points
    std::vector<double> alpha_, beta_, draw_;
};

class RandomBaseline final : public Policy {
public:
    double priority(const SimUser& u, Rng& rng) const override;
    void update(const std::vector<Observation>&, const Population&) override {}
    nlohmann::json snapshot() const override;
};

std::unique_ptr<Policy> make_policy(const LearnerSpec& spec, const Population& pop);

} // namespace adscreen::adsim
