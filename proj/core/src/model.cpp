#include "preempt/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "preempt/errors.hpp"

namespace preempt {

namespace {

void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidModel(message);
}

void require_domain(double y) {
    if (!(y >= 0.0)) throw std::domain_error("profit level must be >= 0, got " + std::to_string(y));
}

}  // namespace

void validate(const ModelParams& p) {
    for (double v : {p.nu, p.eta, p.mu, p.sigma, p.r, p.K, p.D1, p.D2}) {
        require(std::isfinite(v), "model parameters must be finite");
    }
    require(p.eta > 0.0, "eta must be > 0");
    require(p.sigma > 0.0, "sigma must be > 0");
    require(p.r > 0.0, "r must be > 0");
    require(p.K > 0.0, "K must be > 0");
    require(p.D2 > 0.0 && p.D2 < p.D1, "quantities must satisfy 0 < D2 < D1");
}

Derived derive(const ModelParams& p) {
    validate(p);
    Derived d;
    d.lambda = (p.mu - p.r) / p.sigma;
    d.delta = p.eta * d.lambda - (p.nu - p.r);
    if (!(d.delta > 0.0)) {
        throw InvalidModel("delta = eta*lambda - (nu - r) must be > 0, got " + std::to_string(d.delta));
    }
    const double eta2 = p.eta * p.eta;
    const double a = 0.5 - (p.r - d.delta) / eta2;
    d.beta = a + std::sqrt(a * a + 2.0 * p.r / eta2);
    d.y_f = d.delta * p.K * d.beta / (p.D2 * (d.beta - 1.0));
    return d;
}

Model::Model(const ModelParams& params) : params_(params), derived_(derive(params)) {}

double Model::perpetuity(double y, double quantity) const {
    return quantity * y / derived_.delta;
}

double Model::scaled_power(double y) const {
    if (y == 0.0) return 0.0;
    return std::exp(derived_.beta * std::log(y / derived_.y_f));
}

double Model::follower_value(double y) const {
    require_domain(y);
    if (y < derived_.y_f) return params_.K / (derived_.beta - 1.0) * scaled_power(y);
    return sharing_value(y);
}

double Model::leader_value(double y) const {
    require_domain(y);
    if (y >= derived_.y_f) return sharing_value(y);
    const double b = derived_.beta;
    const double dilution = (params_.D1 - params_.D2) / params_.D2 * params_.K * b / (b - 1.0);
    return perpetuity(y, params_.D1) - dilution * scaled_power(y) - params_.K;
}

double Model::sharing_value(double y) const {
    require_domain(y);
    return perpetuity(y, params_.D2) - params_.K;
}

PayoffTriple Model::payoff_triple(double y) const {
    return {leader_value(y), follower_value(y), sharing_value(y)};
}

}  // namespace preempt
