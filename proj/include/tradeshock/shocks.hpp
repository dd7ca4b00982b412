#ifndef TRADESHOCK_SHOCKS_HPP
#define TRADESHOCK_SHOCKS_HPP

#include <cstddef>
#include <limits>

#include "tradeshock/matrix.hpp"
#include "tradeshock/model.hpp"

namespace tradeshock {

enum class ShockKind { node_delete, node_perturb, link_delete };

struct ShockDescriptor {
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    ShockKind kind = ShockKind::node_delete;
    std::size_t target_a = npos;
    std::size_t target_b = npos;    // second endpoint for link deletion
    double import_scale = 1.0;      // a, row scaling for perturbations
    double export_scale = 1.0;      // b, column scaling for perturbations
};

/// A shocked import matrix together with its adjusted model. Constructors
/// never mutate their inputs; share rows always sum to 1 or stay all-zero.
struct ShockedState {
    ImportMatrix matrix;
    IncomeModel model;
    ShockDescriptor shock;
};

/// Disconnects node i: row and column i of the matrix and share table are
/// zeroed, remaining nonzero share rows are renormalized, and the node's
/// spend rate and internal income are set to zero.
ShockedState delete_node(const ImportMatrix& m, const IncomeModel& model, std::size_t i);

/// Scales node i's imports by a and its exports by b (a, b in [0, 1]).
/// Shares: row i scaled by a, column i by b, then every nonzero row is
/// renormalized once. The node's spend rate is multiplied by b/a, uncapped;
/// internal income is unchanged. a = b = 0 routes to delete_node; a = 0 with
/// b > 0 is rejected since the spend-rate scaling is undefined there.
ShockedState perturb_node(const ImportMatrix& m, const IncomeModel& model, std::size_t i,
                          double a, double b);

/// Removes the bilateral relationship between i and j: both directed entries
/// are zeroed in the matrix and the share table, rows i and j renormalized.
/// Spend rates and internal income are unchanged. Symmetric in (i, j).
ShockedState delete_link(const ImportMatrix& m, const IncomeModel& model, std::size_t i,
                         std::size_t j);

} // namespace tradeshock

#endif
