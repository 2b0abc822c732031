#include "localdep/synth.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace localdep {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::bivariate_normal: return "bivariate_normal";
    case Family::gaussian_copula: return "gaussian_copula";
    case Family::functional: return "functional";
    case Family::independent: return "independent";
  }
  return "unknown";
}

std::string_view to_string(Function f) {
  switch (f) {
    case Function::identity: return "identity";
    case Function::square: return "square";
    case Function::sine: return "sine";
    case Function::step: return "step";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::bivariate_normal, Family::gaussian_copula, Family::functional,
                   Family::independent}) {
    if (name == to_string(f)) {
      return f;
    }
  }
  throw PreconditionError("unknown generator family '" + std::string(name) + "'");
}

Function parse_function(std::string_view name) {
  for (Function f : {Function::identity, Function::square, Function::sine, Function::step}) {
    if (name == to_string(f)) {
      return f;
    }
  }
  throw PreconditionError("unknown function '" + std::string(name) + "'");
}

double apply_function(Function f, double u) {
  switch (f) {
    case Function::identity:
      return u;
    case Function::square:
      return u * u;
    case Function::sine: {
      const double s = std::sin(std::numbers::pi * u);
      return s * s;
    }
    case Function::step: {
      static constexpr double kLevels[] = {0.75, 0.25, 1.0, 0.5};
      const auto q = static_cast<std::size_t>(std::min(3.0, std::floor(u * 4.0)));
      return kLevels[q];
    }
  }
  return u;
}

void validate(const GeneratorSpec& spec) {
  if (!(std::abs(spec.rho) <= 1.0)) {
    throw PreconditionError("rho must lie in [-1, 1]");
  }
  if (spec.n < 2) {
    throw PreconditionError("n must be at least 2");
  }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

struct Draw {
  std::vector<double> a;
  std::vector<double> b;
};

Draw draw(const GeneratorSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  Draw d;
  d.a.resize(spec.n);
  d.b.resize(spec.n);
  switch (spec.family) {
    case Family::bivariate_normal:
    case Family::gaussian_copula: {
      const double scale = std::sqrt(1.0 - spec.rho * spec.rho);
      for (std::size_t i = 0; i < spec.n; ++i) {
        const auto [x, w] = rng.normal_pair();
        d.a[i] = x;
        d.b[i] = spec.rho * x + scale * w;
      }
      if (spec.family == Family::gaussian_copula) {
        for (std::size_t i = 0; i < spec.n; ++i) {
          d.a[i] = normal_cdf(d.a[i]);
          d.b[i] = normal_cdf(d.b[i]);
        }
      }
      break;
    }
    case Family::functional:
      for (std::size_t i = 0; i < spec.n; ++i) {
        d.a[i] = rng.uniform_open_closed();
        d.b[i] = apply_function(spec.f, d.a[i]);
      }
      break;
    case Family::independent:
      for (std::size_t i = 0; i < spec.n; ++i) {
        d.a[i] = rng.uniform_open_closed();
        d.b[i] = rng.uniform_open_closed();
      }
      break;
  }
  return d;
}

}  // namespace

PairedSample generate(const GeneratorSpec& spec) {
  Draw d = draw(spec);
  return PairedSample(std::move(d.a), std::move(d.b));
}

UnitSquareSample generate_unit(const GeneratorSpec& spec) {
  if (spec.family == Family::bivariate_normal) {
    throw PreconditionError("bivariate_normal output is not on the unit square");
  }
  Draw d = draw(spec);
  return UnitSquareSample(std::move(d.a), std::move(d.b));
}

void to_json(nlohmann::json& j, const GeneratorSpec& spec) {
  j = nlohmann::json{{"family", to_string(spec.family)},
                     {"rho", spec.rho},
                     {"n", spec.n},
                     {"seed", spec.seed},
                     {"f", to_string(spec.f)}};
}

void from_json(const nlohmann::json& j, GeneratorSpec& spec) {
  spec.family = parse_family(j.at("family").get<std::string>());
  spec.rho = j.value("rho", 0.0);
  spec.n = j.at("n").get<std::size_t>();
  spec.seed = j.value("seed", Seed{0});
  spec.f = parse_function(j.value("f", std::string("identity")));
}

}  // namespace localdep
