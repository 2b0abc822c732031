#pragma once

// Seeded generators for the bivariate normal, Gaussian copula, functional
// and independent families. Output is a pure function of (spec).

#include <cstddef>
#include <string>
#include <string_view>

#include <json.hpp>

#include "localdep/core.hpp"

namespace localdep {

enum class Family { bivariate_normal, gaussian_copula, functional, independent };

/// Concrete functional-dependence shapes, each mapping (0, 1] into (0, 1].
///   identity: u
///   square:   u²
///   sine:     sin²(πu)           (non-monotone)
///   step:     4-level staircase  (levels 0.75, 0.25, 1, 0.5 on the quarters)
enum class Function { identity, square, sine, step };

struct GeneratorSpec {
  Family family = Family::independent;
  double rho = 0.0;
  Function f = Function::identity;
  std::size_t n = 0;
  Seed seed = 0;
};

std::string_view to_string(Family family);
std::string_view to_string(Function f);
/// Throw PreconditionError on unknown names.
Family parse_family(std::string_view name);
Function parse_function(std::string_view name);

double apply_function(Function f, double u);

/// Throws PreconditionError for |ρ| > 1 or n < 2.
void validate(const GeneratorSpec& spec);

/// Draws the sample. bivariate_normal: x ~ N(0,1), y = ρx + √(1−ρ²)·w.
/// gaussian_copula: (Φ(x), Φ(y)) of the same draw. functional: u ~ U(0,1],
/// v = f(u). independent: two U(0,1] streams (interleaved draws).
PairedSample generate(const GeneratorSpec& spec);

/// Same draw for the families that live on the unit square; throws
/// PreconditionError for bivariate_normal.
UnitSquareSample generate_unit(const GeneratorSpec& spec);

/// Standard normal CDF via erfc; absolute error below 1e-15.
double normal_cdf(double x);

void to_json(nlohmann::json& j, const GeneratorSpec& spec);
void from_json(const nlohmann::json& j, GeneratorSpec& spec);

}  // namespace localdep
