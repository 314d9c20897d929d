#include "dcm/neuralops.hpp"

#include <cmath>
#include <limits>

#include "dcm/errors.hpp"

namespace dcm {

FilterBank make_filter_bank(std::size_t maps, std::size_t dim, std::size_t width) {
  if (maps < 1 || dim < 1 || width < 1)
    throw ShapeError("filter bank needs maps, dim and width all >= 1");
  return FilterBank{Matrix(maps, dim * width, 0.0), Vector(maps, 0.0)};
}

Matrix convolve(const SentenceMatrix& input, const FilterBank& bank, std::size_t dim,
                std::size_t width) {
  const Matrix& s = input.values;
  if (s.rows() != dim)
    throw ShapeError("convolve: sentence matrix has " + std::to_string(s.rows()) +
                     " rows, filters expect " + std::to_string(dim));
  if (bank.weights.cols() != dim * width || bank.bias.size() != bank.maps())
    throw ShapeError("convolve: filter bank shape does not match dim*width");
  if (s.cols() < width) throw ShapeError("convolve: input narrower than the filter");

  const std::size_t out_width = s.cols() - width + 1;
  Matrix out(bank.maps(), out_width, 0.0);
  for (std::size_t k = 0; k < bank.maps(); ++k) {
    const double* filt = bank.weights.row(k);
    for (std::size_t i = 0; i < out_width; ++i) {
      double acc = bank.bias[k];
      for (std::size_t r = 0; r < dim; ++r) {
        const double* srow = s.row(r) + i;
        const double* frow = filt + r * width;
        for (std::size_t j = 0; j < width; ++j) acc += srow[j] * frow[j];
      }
      out(k, i) = acc;
    }
  }
  return out;
}

Matrix relu(const Matrix& pre) {
  Matrix out = pre;
  for (double& v : out.flat()) v = v > 0.0 ? v : 0.0;
  return out;
}

Vector maxpool_columns(const Matrix& feature_map, MaxPoolTape* tape) {
  if (feature_map.cols() < 1) throw ShapeError("maxpool: feature map has no columns");
  Vector out(feature_map.rows(), 0.0);
  if (tape) tape->argmax.assign(feature_map.rows(), 0);
  for (std::size_t r = 0; r < feature_map.rows(); ++r) {
    const double* row = feature_map.row(r);
    double best = row[0];
    std::size_t best_col = 0;
    for (std::size_t c = 1; c < feature_map.cols(); ++c) {
      if (row[c] > best) {  // strict: ties keep the first occurrence
        best = row[c];
        best_col = c;
      }
    }
    out[r] = best;
    if (tape) tape->argmax[r] = best_col;
  }
  return out;
}

double bilinear_similarity(const Vector& x, const Matrix& m, const Vector& y) {
  if (m.rows() != x.size() || m.cols() != y.size())
    throw ShapeError("bilinear: vector lengths do not match the matrix");
  double acc = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) acc += x[r] * dot({m.row(r), m.cols()}, y);
  return acc;
}

Vector affine(const Vector& x, const Matrix& weights, const Vector& bias) {
  if (weights.cols() != x.size() || weights.rows() != bias.size())
    throw ShapeError("affine: shapes do not agree");
  Vector out = matvec(weights, x);
  for (std::size_t r = 0; r < out.size(); ++r) out[r] += bias[r];
  return out;
}

double sigmoid(double z) {
  double p;
  if (z >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    p = e / (1.0 + e);
  }
  // keep the output strictly inside (0, 1) even where exp underflows
  constexpr double kLo = std::numeric_limits<double>::denorm_min();
  constexpr double kHi = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  return std::min(std::max(p, kLo), kHi);
}

void convolve_backward(const Matrix& upstream, const SentenceMatrix& input, const FilterBank& bank,
                       std::size_t dim, std::size_t width, FilterBank& d_bank, Matrix& d_input) {
  const Matrix& s = input.values;
  const std::size_t out_width = s.cols() - width + 1;
  if (upstream.rows() != bank.maps() || upstream.cols() != out_width)
    throw ShapeError("convolve_backward: upstream shape does not match the forward output");
  if (d_input.rows() != s.rows() || d_input.cols() != s.cols())
    throw ShapeError("convolve_backward: d_input shape does not match the input");

  for (std::size_t k = 0; k < bank.maps(); ++k) {
    const double* filt = bank.weights.row(k);
    double* d_filt = d_bank.weights.row(k);
    for (std::size_t i = 0; i < out_width; ++i) {
      const double g = upstream(k, i);
      if (g == 0.0) continue;
      d_bank.bias[k] += g;
      for (std::size_t r = 0; r < dim; ++r) {
        const double* srow = s.row(r) + i;
        double* d_srow = d_input.row(r) + i;
        const double* frow = filt + r * width;
        double* d_frow = d_filt + r * width;
        for (std::size_t j = 0; j < width; ++j) {
          d_frow[j] += g * srow[j];
          d_srow[j] += g * frow[j];
        }
      }
    }
  }
}

Matrix relu_backward(const Matrix& upstream, const Matrix& pre) {
  if (upstream.rows() != pre.rows() || upstream.cols() != pre.cols())
    throw ShapeError("relu_backward: upstream shape does not match the pre-activation");
  Matrix out = upstream;
  const auto src = pre.flat();
  auto dst = out.flat();
  for (std::size_t i = 0; i < dst.size(); ++i)
    if (src[i] <= 0.0) dst[i] = 0.0;
  return out;
}

void maxpool_backward(const Vector& upstream, const MaxPoolTape& tape, Matrix& d_feature_map) {
  if (upstream.size() != tape.argmax.size() || upstream.size() != d_feature_map.rows())
    throw ShapeError("maxpool_backward: tape does not match the upstream gradient");
  for (std::size_t r = 0; r < upstream.size(); ++r)
    d_feature_map(r, tape.argmax[r]) += upstream[r];
}

void bilinear_backward(double upstream, const Vector& x, const Matrix& m, const Vector& y,
                       Matrix& d_m, Vector& d_x, Vector& d_y) {
  add_outer(d_m, x, y, upstream);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* row = m.row(r);
    d_x[r] += upstream * dot({row, m.cols()}, y);
    const double xr = upstream * x[r];
    for (std::size_t c = 0; c < m.cols(); ++c) d_y[c] += xr * row[c];
  }
}

void affine_backward(const Vector& upstream, const Vector& x, const Matrix& weights,
                     Matrix& d_weights, Vector& d_bias, Vector& d_x) {
  add_outer(d_weights, upstream, x);
  for (std::size_t r = 0; r < upstream.size(); ++r) d_bias[r] += upstream[r];
  for (std::size_t r = 0; r < weights.rows(); ++r) {
    const double* row = weights.row(r);
    const double ur = upstream[r];
    for (std::size_t c = 0; c < weights.cols(); ++c) d_x[c] += ur * row[c];
  }
}

double sigmoid_backward(double upstream, double output) {
  return upstream * output * (1.0 - output);
}

GradCheckResult gradient_check(const std::function<double()>& f, std::span<double> params,
                               std::span<const double> analytic, double epsilon, double tolerance,
                               const std::function<bool(std::size_t)>& skip) {
  if (params.size() != analytic.size())
    throw ShapeError("gradient_check: parameter and gradient sizes differ");
  if (epsilon <= 0.0) throw DataError("gradient_check: epsilon must be positive");

  GradCheckResult result;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (skip && skip(i)) continue;
    const double saved = params[i];
    params[i] = saved + epsilon;
    const double up = f();
    params[i] = saved - epsilon;
    const double down = f();
    params[i] = saved;
    if (!std::isfinite(up) || !std::isfinite(down))
      throw ComputeError("gradient_check: non-finite objective at coordinate " +
                         std::to_string(i));
    const double numeric = (up - down) / (2.0 * epsilon);
    const double a = analytic[i];
    const double rel =
        std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
    if (rel > result.max_rel_error) {
      result.max_rel_error = rel;
      result.worst_index = i;
    }
    ++result.checked;
  }
  result.pass = result.max_rel_error < tolerance;
  return result;
}

}  // namespace dcm
