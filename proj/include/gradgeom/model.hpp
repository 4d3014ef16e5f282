#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gradgeom/matrix.hpp"

namespace gradgeom {

enum class Activation { tanh, identity };
enum class LossKind { squared_error, softmax_cross_entropy };

struct Sample {
    std::vector<double> x;
    std::vector<double> y;  // regression target; unused for classification
    int label = -1;         // class index; unused for regression
};

struct Dataset {
    std::vector<Sample> samples;
    LossKind loss_kind = LossKind::squared_error;

    std::size_t size() const { return samples.size(); }
};

// Fully-connected network with a flat parameter vector. Packing order:
// all weight matrices (layer 0..L-1, row-major), then all bias vectors
// (layer 0..L-1). The hidden activation applies to every layer except the
// last, which is affine.
class Model {
public:
    Model() = default;
    Model(std::vector<std::size_t> layer_dims, Activation act);

    static Model seeded(std::vector<std::size_t> layer_dims, Activation act,
                        std::uint64_t seed, double weight_scale = 1.0);

    const std::vector<std::size_t>& layer_dims() const { return dims_; }
    Activation activation() const { return act_; }
    std::size_t input_dim() const { return dims_.front(); }
    std::size_t output_dim() const { return dims_.back(); }
    std::size_t num_layers() const { return dims_.size() - 1; }
    std::size_t param_count() const { return theta_.size(); }

    const std::vector<double>& theta() const { return theta_; }
    void set_theta(std::vector<double> theta);

    // flat offsets of layer l's weight block / bias block
    std::size_t weight_offset(std::size_t l) const { return w_off_[l]; }
    std::size_t bias_offset(std::size_t l) const { return b_off_[l]; }

    std::vector<double> forward(const std::vector<double>& x) const;
    double loss(const Sample& s, LossKind kind) const;
    std::vector<double> grad_theta(const Sample& s, LossKind kind) const;

    // exact forward-mode directional derivatives (dual-number propagation)
    std::vector<double> jvp_input(const std::vector<double>& x,
                                  const std::vector<double>& v) const;
    std::vector<double> jvp_param(const std::vector<double>& x,
                                  const std::vector<double>& dtheta) const;

    // reverse-mode cotangent pullbacks
    std::vector<double> vjp_input(const std::vector<double>& x,
                                  const std::vector<double>& u) const;
    std::vector<double> vjp_param(const std::vector<double>& x,
                                  const std::vector<double>& u) const;

    // dense test oracles; refuse when d_out * (d_in or K) exceeds 1e7
    Matrix full_jacobian_input(const std::vector<double>& x) const;
    Matrix full_jacobian_param(const std::vector<double>& x) const;

    // FNV-1a digest of the raw parameter bytes; identifies the expansion point
    std::uint64_t theta_hash() const;

private:
    struct Trace {
        std::vector<std::vector<double>> activations;  // a_0 = x .. a_L
        std::vector<std::vector<double>> pre;          // z_1 .. z_L
    };
    Trace run_forward(const std::vector<double>& x) const;
    void check_input(const std::vector<double>& x) const;

    std::vector<std::size_t> dims_;
    Activation act_ = Activation::tanh;
    std::vector<double> theta_;
    std::vector<std::size_t> w_off_, b_off_;
};

// loss gradient with respect to the network output
std::vector<double> loss_output_gradient(const std::vector<double>& output,
                                         const Sample& s, LossKind kind);

std::vector<double> softmax(const std::vector<double>& logits);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& v);

}  // namespace gradgeom
