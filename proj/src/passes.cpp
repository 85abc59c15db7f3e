// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/passes.hpp"

#include "qcomp/rng.hpp"

namespace qcomp {

std::string pass_kind_name(PassKind kind) {
  switch (kind) {
  case PassKind::Synthesis:
    return "synthesis";
  case PassKind::Layout:
    return "layout";
  case PassKind::Routing:
    return "routing";
  case PassKind::CombinedMapping:
    return "combined-mapping";
  case PassKind::OptPreserving:
    return "opt-preserving";
  case PassKind::OptGeneral:
    return "opt-general";
  case PassKind::Terminate:
    return "terminate";
  }
  return "?";
}

namespace {

using Apply = std::function<PassResult(const Circuit&, const DeviceModel&,
                                       const MappingState&)>;

PassResult keep_mapping(Circuit circuit, const MappingState& ms) {
  return PassResult{std::move(circuit), ms};
}

Apply wrap_opt(Circuit (*pass)(const Circuit&)) {
  return [pass](const Circuit& c, const DeviceModel&, const MappingState& ms) {
    return keep_mapping(pass(c), ms);
  };
}

std::vector<PassAction> build_catalog() {
  std::vector<PassAction> catalog;
  catalog.push_back({"synth_native", PassKind::Synthesis,
                     [](const Circuit& c, const DeviceModel& d,
                        const MappingState& ms) {
                       return keep_mapping(synthesize_to_native(c, d), ms);
                     }});
  catalog.push_back({"layout_trivial", PassKind::Layout, layout_trivial});
  catalog.push_back({"layout_dense", PassKind::Layout, layout_dense});
  catalog.push_back(
      {"layout_interaction", PassKind::Layout, layout_interaction});
  catalog.push_back({"route_basic", PassKind::Routing, route_basic});
  catalog.push_back({"route_stochastic", PassKind::Routing,
                     [](const Circuit& c, const DeviceModel& d,
                        const MappingState& ms) {
                       return route_stochastic(c, d, ms);
                     }});
  catalog.push_back({"route_lookahead", PassKind::Routing, route_lookahead});
  catalog.push_back({"map_combined", PassKind::CombinedMapping,
                     [](const Circuit& c, const DeviceModel& d,
                        const MappingState& ms) {
                       auto laid = layout_interaction(c, d, ms);
                       return route_lookahead(laid.circuit, d, laid.mapping);
                     }});
  catalog.push_back({"opt_cancel_inverses", PassKind::OptPreserving,
                     wrap_opt(cancel_inverses)});
  catalog.push_back({"opt_merge_rotations", PassKind::OptPreserving,
                     wrap_opt(merge_rotations)});
  catalog.push_back({"opt_drop_identity", PassKind::OptPreserving,
                     [](const Circuit& c, const DeviceModel&,
                        const MappingState& ms) {
                       return keep_mapping(drop_identity_rotations(c), ms);
                     }});
  catalog.push_back({"opt_commute_cancel", PassKind::OptPreserving,
                     wrap_opt(commute_cancel)});
  catalog.push_back({"opt_diag_before_measure", PassKind::OptPreserving,
                     wrap_opt(remove_diag_before_measure)});
  catalog.push_back({"opt_consolidate_2q", PassKind::OptGeneral,
                     [](const Circuit& c, const DeviceModel& d,
                        const MappingState& ms) {
                       return keep_mapping(consolidate_2q_blocks(c, d), ms);
                     }});
  catalog.push_back({"terminate", PassKind::Terminate,
                     [](const Circuit& c, const DeviceModel&,
                        const MappingState& ms) {
                       return keep_mapping(c, ms);
                     }});
  return catalog;
}

} // namespace

const std::vector<PassAction>& pass_catalog() {
  static const std::vector<PassAction> catalog = build_catalog();
  return catalog;
}

std::size_t pass_index(const std::string& id) {
  const auto& catalog = pass_catalog();
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    if (catalog[i].id == id) {
      return i;
    }
  }
  throw PassError("unknown pass id '" + id + "'");
}

const std::string& catalog_version() {
  static const std::string version = [] {
    std::string text = "catalog-v1;";
    for (const auto& action : pass_catalog()) {
      text += action.id + ":" + pass_kind_name(action.kind) + ";";
    }
    return to_hex(fnv1a64(text));
  }();
  return version;
}

PassResult baseline_pipeline(const Circuit& c, const DeviceModel& d,
                             BaselineLevel level) {
  if (c.num_qubits > d.num_qubits) {
    throw PassError("circuit with " + std::to_string(c.num_qubits) +
                    " qubits does not fit device '" + d.id + "'");
  }
  MappingState ms;
  if (level == BaselineLevel::L1) {
    Circuit synthesized = synthesize_to_native(c, d);
    auto laid = layout_trivial(synthesized, d, ms);
    auto routed = route_basic(laid.circuit, d, laid.mapping);
    routed.circuit = cancel_inverses(routed.circuit);
    return routed;
  }
  Circuit merged = merge_rotations(c);
  Circuit synthesized = synthesize_to_native(merged, d);
  auto laid = layout_interaction(synthesized, d, ms);
  auto routed = route_lookahead(laid.circuit, d, laid.mapping);
  routed.circuit = opt_preserving_sweep(routed.circuit);
  return routed;
}

} // namespace qcomp
