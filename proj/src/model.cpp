#include "gradgeom/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "gradgeom/errors.hpp"
#include "gradgeom/rng.hpp"

namespace gradgeom {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw domain_error("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

std::vector<double> softmax(const std::vector<double>& logits) {
    const double mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double z = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - mx);
        z += p[i];
    }
    for (auto& x : p) x /= z;
    return p;
}

Model::Model(std::vector<std::size_t> layer_dims, Activation act)
    : dims_(std::move(layer_dims)), act_(act) {
    if (dims_.size() < 2) throw domain_error("Model: need at least input and output dims");
    for (auto d : dims_)
        if (d == 0) throw domain_error("Model: zero layer dimension");
    std::size_t k = 0;
    w_off_.resize(num_layers());
    b_off_.resize(num_layers());
    for (std::size_t l = 0; l < num_layers(); ++l) {
        w_off_[l] = k;
        k += dims_[l] * dims_[l + 1];
    }
    for (std::size_t l = 0; l < num_layers(); ++l) {
        b_off_[l] = k;
        k += dims_[l + 1];
    }
    theta_.assign(k, 0.0);
}

Model Model::seeded(std::vector<std::size_t> layer_dims, Activation act,
                    std::uint64_t seed, double weight_scale) {
    Model m(std::move(layer_dims), act);
    Rng rng(seed);
    std::vector<double> theta(m.param_count());
    for (std::size_t l = 0; l < m.num_layers(); ++l) {
        const double s = weight_scale / std::sqrt(static_cast<double>(m.dims_[l]));
        const std::size_t n = m.dims_[l] * m.dims_[l + 1];
        for (std::size_t i = 0; i < n; ++i) theta[m.w_off_[l] + i] = s * rng.normal();
    }
    for (std::size_t l = 0; l < m.num_layers(); ++l)
        for (std::size_t i = 0; i < m.dims_[l + 1]; ++i)
            theta[m.b_off_[l] + i] = 0.1 * weight_scale * rng.normal();
    m.set_theta(std::move(theta));
    return m;
}

void Model::set_theta(std::vector<double> theta) {
    if (theta.size() != theta_.size())
        throw domain_error("set_theta: expected " + std::to_string(theta_.size()) +
                           " parameters, got " + std::to_string(theta.size()));
    theta_ = std::move(theta);
}

void Model::check_input(const std::vector<double>& x) const {
    if (x.size() != input_dim())
        throw domain_error("input length " + std::to_string(x.size()) +
                           " does not match d_in " + std::to_string(input_dim()));
}

Model::Trace Model::run_forward(const std::vector<double>& x) const {
    check_input(x);
    Trace t;
    t.activations.push_back(x);
    t.pre.reserve(num_layers());
    for (std::size_t l = 0; l < num_layers(); ++l) {
        const std::size_t din = dims_[l], dout = dims_[l + 1];
        const double* w = theta_.data() + w_off_[l];
        const double* b = theta_.data() + b_off_[l];
        const auto& a = t.activations.back();
        std::vector<double> z(dout);
        for (std::size_t i = 0; i < dout; ++i) {
            double s = b[i];
            for (std::size_t j = 0; j < din; ++j) s += w[i * din + j] * a[j];
            z[i] = s;
        }
        t.pre.push_back(z);
        if (l + 1 < num_layers() && act_ == Activation::tanh)
            for (auto& v : z) v = std::tanh(v);
        t.activations.push_back(std::move(z));
    }
    return t;
}

std::vector<double> Model::forward(const std::vector<double>& x) const {
    return run_forward(x).activations.back();
}

std::vector<double> loss_output_gradient(const std::vector<double>& output,
                                         const Sample& s, LossKind kind) {
    std::vector<double> g(output.size());
    if (kind == LossKind::squared_error) {
        if (s.y.size() != output.size())
            throw domain_error("loss: target length does not match d_out");
        for (std::size_t i = 0; i < output.size(); ++i) g[i] = output[i] - s.y[i];
    } else {
        if (s.label < 0 || static_cast<std::size_t>(s.label) >= output.size())
            throw domain_error("loss: class label " + std::to_string(s.label) +
                               " out of range for d_out " + std::to_string(output.size()));
        g = softmax(output);
        g[static_cast<std::size_t>(s.label)] -= 1.0;
    }
    return g;
}

double Model::loss(const Sample& s, LossKind kind) const {
    const auto out = forward(s.x);
    if (kind == LossKind::squared_error) {
        if (s.y.size() != out.size())
            throw domain_error("loss: target length does not match d_out");
        double acc = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double r = out[i] - s.y[i];
            acc += r * r;
        }
        return 0.5 * acc;
    }
    if (s.label < 0 || static_cast<std::size_t>(s.label) >= out.size())
        throw domain_error("loss: class label " + std::to_string(s.label) +
                           " out of range for d_out " + std::to_string(out.size()));
    const auto p = softmax(out);
    return -std::log(p[static_cast<std::size_t>(s.label)]);
}

std::vector<double> Model::grad_theta(const Sample& s, LossKind kind) const {
    const Trace t = run_forward(s.x);
    const auto u = loss_output_gradient(t.activations.back(), s, kind);

    std::vector<double> grad(param_count(), 0.0);
    std::vector<double> delta = u;  // dL/dz for the current layer
    for (std::size_t l = num_layers(); l-- > 0;) {
        const std::size_t din = dims_[l], dout = dims_[l + 1];
        const auto& a = t.activations[l];
        double* gw = grad.data() + w_off_[l];
        double* gb = grad.data() + b_off_[l];
        for (std::size_t i = 0; i < dout; ++i) {
            gb[i] += delta[i];
            for (std::size_t j = 0; j < din; ++j) gw[i * din + j] += delta[i] * a[j];
        }
        if (l == 0) break;
        const double* w = theta_.data() + w_off_[l];
        std::vector<double> prev(din, 0.0);
        for (std::size_t j = 0; j < din; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < dout; ++i) sum += w[i * din + j] * delta[i];
            prev[j] = sum;
        }
        if (act_ == Activation::tanh) {
            const auto& z = t.pre[l - 1];
            for (std::size_t j = 0; j < din; ++j) {
                const double th = std::tanh(z[j]);
                prev[j] *= 1.0 - th * th;
            }
        }
        delta = std::move(prev);
    }
    return grad;
}

std::vector<double> Model::jvp_input(const std::vector<double>& x,
                                     const std::vector<double>& v) const {
    check_input(x);
    if (v.size() != input_dim()) throw domain_error("jvp_input: tangent length mismatch");
    std::vector<double> a = x, da = v;
    for (std::size_t l = 0; l < num_layers(); ++l) {
        const std::size_t din = dims_[l], dout = dims_[l + 1];
        const double* w = theta_.data() + w_off_[l];
        const double* b = theta_.data() + b_off_[l];
        std::vector<double> z(dout), dz(dout);
        for (std::size_t i = 0; i < dout; ++i) {
            double s = b[i], ds = 0.0;
            for (std::size_t j = 0; j < din; ++j) {
                s += w[i * din + j] * a[j];
                ds += w[i * din + j] * da[j];
            }
            z[i] = s;
            dz[i] = ds;
        }
        if (l + 1 < num_layers() && act_ == Activation::tanh) {
            for (std::size_t i = 0; i < dout; ++i) {
                const double th = std::tanh(z[i]);
                dz[i] *= 1.0 - th * th;
                z[i] = th;
            }
        }
        a = std::move(z);
        da = std::move(dz);
    }
    return da;
}

std::vector<double> Model::jvp_param(const std::vector<double>& x,
                                     const std::vector<double>& dtheta) const {
    check_input(x);
    if (dtheta.size() != param_count())
        throw domain_error("jvp_param: tangent length mismatch");
    std::vector<double> a = x;
    std::vector<double> da(input_dim(), 0.0);
    for (std::size_t l = 0; l < num_layers(); ++l) {
        const std::size_t din = dims_[l], dout = dims_[l + 1];
        const double* w = theta_.data() + w_off_[l];
        const double* b = theta_.data() + b_off_[l];
        const double* dw = dtheta.data() + w_off_[l];
        const double* db = dtheta.data() + b_off_[l];
        std::vector<double> z(dout), dz(dout);
        for (std::size_t i = 0; i < dout; ++i) {
            double s = b[i], ds = db[i];
            for (std::size_t j = 0; j < din; ++j) {
                s += w[i * din + j] * a[j];
                ds += dw[i * din + j] * a[j] + w[i * din + j] * da[j];
            }
            z[i] = s;
            dz[i] = ds;
        }
        if (l + 1 < num_layers() && act_ == Activation::tanh) {
            for (std::size_t i = 0; i < dout; ++i) {
                const double th = std::tanh(z[i]);
                dz[i] *= 1.0 - th * th;
                z[i] = th;
            }
        }
        a = std::move(z);
        da = std::move(dz);
    }
    return da;
}

std::vector<double> Model::vjp_input(const std::vector<double>& x,
                                     const std::vector<double>& u) const {
    if (u.size() != output_dim()) throw domain_error("vjp_input: cotangent length mismatch");
    const Trace t = run_forward(x);
    std::vector<double> delta = u;
    for (std::size_t l = num_layers(); l-- > 0;) {
        const std::size_t din = dims_[l], dout = dims_[l + 1];
        const double* w = theta_.data() + w_off_[l];
        std::vector<double> prev(din, 0.0);
        for (std::size_t j = 0; j < din; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < dout; ++i) sum += w[i * din + j] * delta[i];
            prev[j] = sum;
        }
        if (l > 0 && act_ == Activation::tanh) {
            const auto& z = t.pre[l - 1];
            for (std::size_t j = 0; j < din; ++j) {
                const double th = std::tanh(z[j]);
                prev[j] *= 1.0 - th * th;
            }
        }
        delta = std::move(prev);
    }
    return delta;
}

std::vector<double> Model::vjp_param(const std::vector<double>& x,
                                     const std::vector<double>& u) const {
    if (u.size() != output_dim()) throw domain_error("vjp_param: cotangent length mismatch");
    const Trace t = run_forward(x);
    std::vector<double> grad(param_count(), 0.0);
    std::vector<double> delta = u;
    for (std::size_t l = num_layers(); l-- > 0;) {
        const std::size_t din = dims_[l], dout = dims_[l + 1];
        const auto& a = t.activations[l];
        double* gw = grad.data() + w_off_[l];
        double* gb = grad.data() + b_off_[l];
        for (std::size_t i = 0; i < dout; ++i) {
            gb[i] += delta[i];
            for (std::size_t j = 0; j < din; ++j) gw[i * din + j] += delta[i] * a[j];
        }
        if (l == 0) break;
        const double* w = theta_.data() + w_off_[l];
        std::vector<double> prev(din, 0.0);
        for (std::size_t j = 0; j < din; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < dout; ++i) sum += w[i * din + j] * delta[i];
            prev[j] = sum;
        }
        if (act_ == Activation::tanh) {
            const auto& z = t.pre[l - 1];
            for (std::size_t j = 0; j < din; ++j) {
                const double th = std::tanh(z[j]);
                prev[j] *= 1.0 - th * th;
            }
        }
        delta = std::move(prev);
    }
    return grad;
}

Matrix Model::full_jacobian_input(const std::vector<double>& x) const {
    if (output_dim() * input_dim() > 10'000'000)
        throw domain_error("full_jacobian_input: exceeds the 1e7-entry oracle cap");
    Matrix j(output_dim(), input_dim());
    std::vector<double> e(input_dim(), 0.0);
    for (std::size_t c = 0; c < input_dim(); ++c) {
        e[c] = 1.0;
        const auto col = jvp_input(x, e);
        e[c] = 0.0;
        for (std::size_t r = 0; r < output_dim(); ++r) j(r, c) = col[r];
    }
    return j;
}

Matrix Model::full_jacobian_param(const std::vector<double>& x) const {
    if (output_dim() * param_count() > 10'000'000)
        throw domain_error("full_jacobian_param: exceeds the 1e7-entry oracle cap");
    // rows via VJP with unit cotangents; identical to column-wise JVP assembly
    // but d_out passes instead of K
    Matrix j(output_dim(), param_count());
    std::vector<double> u(output_dim(), 0.0);
    for (std::size_t r = 0; r < output_dim(); ++r) {
        u[r] = 1.0;
        const auto row = vjp_param(x, u);
        u[r] = 0.0;
        for (std::size_t c = 0; c < param_count(); ++c) j(r, c) = row[c];
    }
    return j;
}

std::uint64_t Model::theta_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : theta_) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffu;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

}  // namespace gradgeom
