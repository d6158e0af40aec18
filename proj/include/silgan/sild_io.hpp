#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "silgan/data.hpp"

namespace silgan::io {

// SILD container: 16-byte header (magic "SILD", version u32, count u32,
// L u16, T u16) followed by count * L * T little-endian float32 samples,
// row-major per maneuver. SILT shares the header (magic "SILT"); each record
// additionally carries u32 signal_index, u32 breakpoint count and the
// (u32 time, f32 value) breakpoint pairs after its sample block.

inline constexpr std::uint32_t kContainerVersion = 1;

void save_dataset(const std::vector<Maneuver>& maneuvers, const std::string& path);

/// Throws magic_error / version_error / truncation_error on malformed files.
std::vector<Maneuver> load_dataset(const std::string& path);

void save_templates(const std::vector<Template>& templates, const std::string& path);
std::vector<Template> load_templates(const std::string& path);

/// Parses one hand-authored template: {"signal_index": l, "breakpoints": [[t, v], ...]}.
Template template_from_json(const std::string& json_text);
std::string template_to_json(const Template& t);

/// Loads a JSON template file holding either one template object or an
/// array of them (a scenario).
std::vector<Template> load_templates_json(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace silgan::io
