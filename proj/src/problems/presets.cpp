#include "oedflow/problems/presets.hpp"

#include "oedflow/problems/circle.hpp"
#include "oedflow/problems/darcy.hpp"
#include "oedflow/problems/eit.hpp"

namespace oedflow {

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"circle", "darcy_bump", "eit_homogeneous",
                                              "eit_inhomogeneous"};
  return names;
}

BuiltModel build_model(const std::string& preset, const ModelOptions& options) {
  if (preset == "circle") return {std::make_shared<CircleModel>(), 64};
  if (preset == "darcy_bump") {
    return {std::make_shared<DarcyModel>(DarcyMedia::bump(), options.darcy_cells, options.darcy_params),
            options.darcy_cells + 1};
  }
  const EitOptions eit{options.n_boundary, options.n_eval, options.n_rings};
  if (preset == "eit_homogeneous") {
    return {std::make_shared<EitModel>(EitMedia::homogeneous(options.eit_c), eit), options.n_boundary};
  }
  if (preset == "eit_inhomogeneous") {
    return {std::make_shared<EitModel>(EitMedia::inhomogeneous(), eit), options.n_boundary};
  }
  throw UnknownPreset("unknown problem preset '" + preset + "'");
}

}  // namespace oedflow
