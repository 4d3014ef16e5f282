#pragma once

#include <vector>

#include "gradgeom/matrix.hpp"
#include "gradgeom/model.hpp"

namespace gradgeom::subspace {

enum class BasisOrigin { icl, lora, raw };

struct SubspaceBasis {
    Matrix basis;  // K x r, column-orthonormal
    std::size_t r = 0;
    BasisOrigin origin = BasisOrigin::raw;
};

// Low-rank update block: delta = scale * a * b (rows x cols), flattened
// row-major onto the full parameter vector; rows * cols must equal K.
struct LoraAdapter {
    Matrix a;  // rows x r
    Matrix b;  // r x cols
    double scale = 1.0;
};

SubspaceBasis make_basis(Matrix m, BasisOrigin origin);  // validates orthonormality

// span of the per-demonstration loss gradients: stack the k gradients as rows,
// take the top right singular vectors. Returned rank may be below the request
// when the stack is numerically rank-deficient (threshold 1e-10 * sigma_max).
SubspaceBasis icl_subspace(const Model& model, const std::vector<Sample>& demos,
                           std::size_t r, LossKind loss_kind);

SubspaceBasis lora_basis(const LoraAdapter& adapter);  // QR of A

Model apply_lora(const Model& model, const LoraAdapter& adapter);

// ascending canonical angles in [0, pi/2]; count = min(r1, r2)
std::vector<double> principal_angles(const SubspaceBasis& b1, const SubspaceBasis& b2);

}  // namespace gradgeom::subspace
