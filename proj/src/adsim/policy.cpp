#include "adscreen/adsim/policy.hpp"

#include "adscreen/common/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adscreen::adsim {

std::string_view to_string(LearnerKind k) {
    switch (k) {
    case LearnerKind::online_logistic: return "online_logistic";
    case LearnerKind::thompson_beta_segments: return "thompson_beta_segments";
    case LearnerKind::random_baseline: return "random_baseline";
    }
    return "?";
}

std::optional<LearnerKind> parse_learner_kind(std::string_view text) {
    for (auto k : {LearnerKind::online_logistic, LearnerKind::thompson_beta_segments, LearnerKind::random_baseline})
        if (to_string(k) == text) return k;
    if (text == "random") return LearnerKind::random_baseline;
    if (text == "logistic") return LearnerKind::online_logistic;
    if (text == "thompson") return LearnerKind::thompson_beta_segments;
    return std::nullopt;
}

void validate(const LearnerSpec& s) {
    if (!(s.epsilon >= 0.0 && s.epsilon <= 1.0)) throw ValidationError("learner.epsilon must be in [0, 1]", "epsilon");
    if (!(s.learning_rate > 0.0)) throw ValidationError("learner.learning_rate must be positive", "learning_rate");
    if (s.epochs == 0) throw ValidationError("learner.epochs must be positive", "epochs");
    if (s.l2 < 0.0) throw ValidationError("learner.l2 must be non-negative", "l2");
    if (s.segments == 0) throw ValidationError("learner.segments must be positive", "segments");
    if (!(s.prior_alpha > 0.0) || !(s.prior_beta > 0.0))
        throw ValidationError("learner Beta prior parameters must be positive", "prior_alpha");
}

OnlineLogistic::OnlineLogistic(const LearnerSpec& spec, std::size_t n_features) : spec_(spec), w_(n_features, 0.0) {}

double OnlineLogistic::priority(const SimUser& u, Rng&) const {
    return std::inner_product(w_.begin(), w_.end(), u.features.begin(), b_);
}

void OnlineLogistic::update(const std::vector<Observation>& day, const Population& pop) {
    for (std::size_t epoch = 0; epoch < spec_.epochs; ++epoch)
        for (const auto& obs : day) {
            const auto& x = pop.users[obs.user].features;
            const double z = std::inner_product(w_.begin(), w_.end(), x.begin(), b_);
            const double p = 1.0 / (1.0 + std::exp(-z));
            const double g = (obs.converted ? 1.0 : 0.0) - p;
            for (std::size_t j = 0; j < w_.size(); ++j) w_[j] += spec_.learning_rate * (g * x[j] - spec_.l2 * w_[j]);
            b_ += spec_.learning_rate * g;
        }
}

nlohmann::json OnlineLogistic::snapshot() const {
    return {{"kind", to_string(LearnerKind::online_logistic)}, {"weights", w_}, {"bias", b_}};
}

namespace {

double feature_sum(const SimUser& u) { return std::accumulate(u.features.begin(), u.features.end(), 0.0); }

} // namespace

ThompsonSegments::ThompsonSegments(const LearnerSpec& spec, const Population& pop)
    : spec_(spec), alpha_(spec.segments, spec.prior_alpha), beta_(spec.segments, spec.prior_beta),
      draw_(spec.segments, 0.0) {
    std::vector<double> sums;
    sums.reserve(pop.users.size());
    for (const auto& u : pop.users) sums.push_back(feature_sum(u));
    std::sort(sums.begin(), sums.end());
    for (std::size_t s = 1; s < spec.segments; ++s) edges_.push_back(sums[s * sums.size() / spec.segments]);
    for (std::size_t s = 0; s < spec.segments; ++s) draw_[s] = alpha_[s] / (alpha_[s] + beta_[s]);
}

std::size_t ThompsonSegments::segment_of(const SimUser& u) const {
    return static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), feature_sum(u)) - edges_.begin());
}

void ThompsonSegments::begin_day(Rng& rng) {
    for (std::size_t s = 0; s < draw_.size(); ++s) {
        std::gamma_distribution<double> ga(alpha_[s], 1.0), gb(beta_[s], 1.0);
        const double x = ga(rng), y = gb(rng);
        draw_[s] = x / (x + y);
    }
}

double ThompsonSegments::priority(const SimUser& u, Rng&) const { return draw_[segment_of(u)]; }

void ThompsonSegments::update(const std::vector<Observation>& day, const Population& pop) {
    for (const auto& obs : day) {
        const auto s = segment_of(pop.users[obs.user]);
        (obs.converted ? alpha_ : beta_)[s] += 1.0;
    }
}

nlohmann::json ThompsonSegments::snapshot() const {
    std::vector<double> mean;
    for (std::size_t s = 0; s < alpha_.size(); ++s) mean.push_back(alpha_[s] / (alpha_[s] + beta_[s]));
    return {{"kind", to_string(LearnerKind::thompson_beta_segments)},
            {"alpha", alpha_},
            {"beta", beta_},
            {"posterior_mean", mean}};
}

double RandomBaseline::priority(const SimUser&, Rng& rng) const { return uniform01(rng); }

nlohmann::json RandomBaseline::snapshot() const { return {{"kind", to_string(LearnerKind::random_baseline)}}; }

std::unique_ptr<Policy> make_policy(const LearnerSpec& spec, const Population& pop) {
    validate(spec);
    switch (spec.kind) {
    case LearnerKind::online_logistic: return std::make_unique<OnlineLogistic>(spec, pop.config.n_features);
    case LearnerKind::thompson_beta_segments: return std::make_unique<ThompsonSegments>(spec, pop);
    case LearnerKind::random_baseline: return std::make_unique<RandomBaseline>();
    }
    throw ValidationError("unknown learner kind");
}

} // namespace adscreen::adsim
