#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dcm/embedding.hpp"
#include "dcm/matrix.hpp"

namespace dcm {

/// A bank of n convolution filters, each d x m, flattened one filter per row
/// (row k, entry r*m + j is filter k's weight at embedding row r, offset j),
/// plus one scalar bias per feature map.
struct FilterBank {
  Matrix weights;  // n x (d*m)
  Vector bias;     // n

  std::size_t maps() const { return weights.rows(); }
};

FilterBank make_filter_bank(std::size_t maps, std::size_t dim, std::size_t width);

// ---------------------------------------------------------------------------
// Forward passes. Each returns the activations a backward rule needs; the
// matching backward may only be applied to the tape its forward produced.
// ---------------------------------------------------------------------------

// Narrow convolution: out(k, i) = bias_k + sum_{r,j} S(r, i+j) * F_k(r, j),
// output width |s| - m + 1.
Matrix convolve(const SentenceMatrix& input, const FilterBank& bank, std::size_t dim,
                std::size_t width);

Matrix relu(const Matrix& pre);

struct MaxPoolTape {
  std::vector<std::size_t> argmax;  // first maximal column per row
};

// Row-wise max of an n x w feature map.
Vector maxpool_columns(const Matrix& feature_map, MaxPoolTape* tape = nullptr);

// x^T M y
double bilinear_similarity(const Vector& x, const Matrix& m, const Vector& y);

// W x + b
Vector affine(const Vector& x, const Matrix& weights, const Vector& bias);

// 1 / (1 + exp(-z)), overflow-safe, result strictly inside (0, 1).
double sigmoid(double z);

// ---------------------------------------------------------------------------
// Backward passes (exact analytic gradients).
// ---------------------------------------------------------------------------

// Gradient of the convolution w.r.t. filters, bias, and input columns.
// d_input must be d x (input width); accumulates +=.
void convolve_backward(const Matrix& upstream, const SentenceMatrix& input, const FilterBank& bank,
                       std::size_t dim, std::size_t width, FilterBank& d_bank, Matrix& d_input);

// Gates the upstream by the sign of the cached pre-activation.
Matrix relu_backward(const Matrix& upstream, const Matrix& pre);

// Routes each row's gradient to the recorded argmax column; accumulates +=.
void maxpool_backward(const Vector& upstream, const MaxPoolTape& tape, Matrix& d_feature_map);

// d(x^T M y): dM += up * x y^T, dx += up * M y, dy += up * M^T x.
void bilinear_backward(double upstream, const Vector& x, const Matrix& m, const Vector& y,
                       Matrix& d_m, Vector& d_x, Vector& d_y);

// d(W x + b): dW += up x^T, db += up, dx += W^T up.
void affine_backward(const Vector& upstream, const Vector& x, const Matrix& weights,
                     Matrix& d_weights, Vector& d_bias, Vector& d_x);

double sigmoid_backward(double upstream, double output);

// ---------------------------------------------------------------------------
// Finite-difference gradient checking.
// ---------------------------------------------------------------------------

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  std::size_t checked = 0;
  bool pass = true;
};

/// Central-difference check of `analytic` against f evaluated under in-place
/// perturbations of `params`. Coordinates where `skip` returns true (frozen
/// parameters such as the PAD column) are not checked. Relative error is
/// |a - n| / max(|a|, |n|, 1e-8). Throws ComputeError on a non-finite f.
GradCheckResult gradient_check(const std::function<double()>& f, std::span<double> params,
                               std::span<const double> analytic, double epsilon, double tolerance,
                               const std::function<bool(std::size_t)>& skip = nullptr);

}  // namespace dcm
