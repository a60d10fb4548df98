#ifndef BETHE_MODEL_HPP
#define BETHE_MODEL_HPP

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bethe {

using Complex = std::complex<double>;

// Thrown when an S-matrix denominator vanishes on (or too close to) the
// evaluation point; carries the offending factor.
class PoleError : public std::runtime_error {
 public:
  PoleError(const std::string& what, Complex denominator)
      : std::runtime_error(what), denominator_(denominator) {}
  Complex denominator() const { return denominator_; }

 private:
  Complex denominator_;
};

// Adaptive quadrature hit its node cap while successive values still moved.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last, double previous)
      : std::runtime_error(what), last_(last), previous_(previous) {}
  double last_iterate() const { return last_; }
  double previous_iterate() const { return previous_; }

 private:
  double last_;
  double previous_;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { Asep, PushAsep, Asap, Azrp };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

// Per-model parameter set. p/q are the right/left jump biases (p+q=1);
// lambda/mu are the pushing (PushASEP) or avalanche (ASAP) parameters
// (lambda+mu=1) and are ignored for ASEP/AZRP.
struct ModelParams {
  ModelKind kind = ModelKind::Asep;
  double p = 0.5;
  double q = 0.5;
  double lambda = 0.0;
  double mu = 0.0;

  static ModelParams asep(double p);
  static ModelParams push_asep(double p, double mu);
  static ModelParams asap(double p, double mu);
  static ModelParams azrp(double p);
  static ModelParams make(ModelKind kind, double p, double mu_or_nan);

  // Throws std::invalid_argument if the per-model invariants fail.
  void validate() const;

  std::map<std::string, std::string> to_kv() const;
  static ModelParams from_kv(const std::map<std::string, std::string>& kv);
};

// Ordered particle positions plus the model that defines their physical
// region (strictly increasing for exclusion-type models, weakly for AZRP).
struct Configuration {
  ModelKind model = ModelKind::Asep;
  std::vector<int> x;

  Configuration() = default;
  Configuration(ModelKind m, std::vector<int> positions)
      : model(m), x(std::move(positions)) {}

  int n() const { return static_cast<int>(x.size()); }
  bool physical() const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.model == b.model && a.x == b.x;
  }
  friend bool operator<(const Configuration& a, const Configuration& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.model < b.model;
  }
};

bool is_physical(ModelKind model, const std::vector<int>& x);

// Bethe ansatz energy of a single spectral variable: p/xi + q*xi - 1.
Complex energy(Complex xi, const ModelParams& params);

// Two-particle scattering amplitude S_{beta,alpha}(xi_a = xi_alpha,
// xi_b = xi_beta), including the xi_b/xi_a (PushASEP) or xi_a/xi_b (AZRP)
// prefactor.  `core` is the part without the prefactor (the dagger /
// double-dagger factor for PushASEP / AZRP; the whole value otherwise).
struct SMatrixValue {
  Complex value;
  Complex core;
  Complex prefactor;
};

SMatrixValue s_matrix_parts(ModelKind model, Complex xi_a, Complex xi_b,
                            const ModelParams& params);
Complex s_matrix(ModelKind model, Complex xi_a, Complex xi_b,
                 const ModelParams& params);

enum class Direction { Left, Right };

// Block rates of the two-sided PushASEP (closed geometric-sum forms).
struct PushRates {
  int n = 1;
  double r_n = 1.0;
  double l_n = 1.0;
};

PushRates push_rates(int n, const ModelParams& params);
double push_rate(int n, Direction direction, const ModelParams& params);

// Branch probabilities of an ASAP avalanche at a pile of size n >= 2:
// all n hop with probability mu_n, n-1 hop with probability lambda_n.
struct AvalancheRates {
  int n = 2;
  double mu_n = 0.0;
  double lambda_n = 1.0;
};

AvalancheRates avalanche_probs(int n, const ModelParams& params);

}  // namespace bethe

#endif  // BETHE_MODEL_HPP
