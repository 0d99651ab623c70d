#pragma once

#include <string>

#include "fmising/fm.hpp"
#include "fmising/ising.hpp"

namespace fmising {

/// {"n":..., "c":..., "h":[...], "j":[[...]]} with the full symmetric
/// matrix stored row by row.
std::string to_json(const IsingModel& model);
IsingModel model_from_json(const std::string& text);

/// {"n":..., "k":..., "sign":"positive|negative", "w0":..., "w":[...], "v":[[...]]}.
std::string to_json(const FmParams& params);
FmParams fm_from_json(const std::string& text);

void save_model(const IsingModel& model, const std::string& path);
IsingModel load_model(const std::string& path);
void save_fm(const FmParams& params, const std::string& path);
FmParams load_fm(const std::string& path);

}  // namespace fmising
