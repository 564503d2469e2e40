#pragma once

#include <string>
#include <vector>

namespace optomech {

struct PresetInfo {
  std::string name;
  std::string command;
  std::string provenance;
};

/// Shipped presets in display order.
std::vector<PresetInfo> list_presets();

/// Config text of a preset. Throws ConfigError for an unknown name.
const std::string& preset_text(const std::string& name);

}  // namespace optomech
