#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <vector>

#include "trispec/mesh.hpp"

namespace trispec {

// Symmetric sparse operator; full storage, structurally symmetric by assembly.
using SparseSym = Eigen::SparseMatrix<double>;

// Lagrange finite-element space of order 1 or 2 on a Mesh.  Order-1 dofs are
// the mesh nodes; order 2 adds one dof per edge (midpoint).  Boundary and
// interior dof sets partition all dofs.
struct FemSpace {
    int order = 1;
    int ndof = 0;
    std::vector<Vec2> dof_xy;
    std::vector<std::array<int, 6>> elem_dofs;  // entries 3..5 unused for order 1
    std::vector<int> boundary_dofs;             // sorted
    std::vector<int> interior_dofs;             // sorted
    std::vector<int> interior_index;            // dof -> interior position, -1 on boundary
    std::vector<int> boundary_edge_mid_dof;     // per boundary edge, order 2 (-1 for order 1)

    int dofs_per_element() const { return order == 1 ? 3 : 6; }
};

struct Assembled {
    SparseSym K;  // int grad(phi_i) . grad(phi_j)
    SparseSym M;  // int phi_i phi_j
    FemSpace space;
};

// Exact integration (polynomial integrands, degree-matched rules).
// Throws AssemblyError naming the element if one is degenerate.
Assembled assemble(const Mesh& mesh, int order);

struct Reduced {
    SparseSym K;
    SparseSym M;
};

// Eliminate Dirichlet rows/columns; dimensions equal the interior dof count.
// Throws InvalidParameter when the interior is empty (ndiv too small).
Reduced reduce_dirichlet(const Assembled& assembled);

// Reference shape functions at (xi, eta): values N[k] and gradients
// (dN[2k], dN[2k+1]) with respect to (xi, eta).  k < 3 for order 1, else 6.
void shape_functions(int order, double xi, double eta, double* N, double* dN);

class AssemblyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace trispec
