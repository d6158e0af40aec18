#include "silgan/sild_io.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

namespace silgan::io {

namespace {

constexpr std::size_t kHeaderSize = 16;

void put_u32(std::string& buf, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  buf.append(b, 4);
}

void put_u16(std::string& buf, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  buf.append(b, 2);
}

void put_f32(std::string& buf, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(buf, bits);
}

class reader {
 public:
  reader(const std::string& data, const std::string& path) : data_(data), path_(path) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(data_[pos_ + i]);
    pos_ += 4;
    return v;
  }

  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(
        static_cast<unsigned char>(data_[pos_]) |
        (static_cast<unsigned char>(data_[pos_ + 1]) << 8));
    pos_ += 2;
    return v;
  }

  float f32() {
    std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }

  void floats(float* dst, std::size_t n) {
    need(4 * n);
    std::memcpy(dst, data_.data() + pos_, 4 * n);
    pos_ += 4 * n;
  }

  std::string magic() {
    need(4);
    std::string m = data_.substr(pos_, 4);
    pos_ += 4;
    return m;
  }

  std::size_t size() const { return data_.size(); }

 private:
  void need(std::size_t n) {
    if (pos_ + n > data_.size())
      throw truncation_error(path_ + ": truncated, need at least " +
                             std::to_string(pos_ + n) + " bytes but file has " +
                             std::to_string(data_.size()));
  }

  const std::string& data_;
  std::string path_;
  std::size_t pos_ = 0;
};

void check_header(reader& r, const std::string& path, const char* want_magic,
                  std::uint32_t& count, std::uint16_t& l, std::uint16_t& t) {
  const std::string magic = r.magic();
  if (magic != want_magic)
    throw magic_error(path + ": bad magic '" + magic + "', expected '" + want_magic + "'");
  const std::uint32_t version = r.u32();
  if (version != kContainerVersion)
    throw version_error(path + ": unsupported version " + std::to_string(version) +
                        ", expected " + std::to_string(kContainerVersion));
  count = r.u32();
  l = r.u16();
  t = r.u16();
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open " + path + " for reading");
  std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (f.bad()) throw io_error("read failed on " + path);
  return data;
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("cannot open " + path + " for writing");
  f.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!f) throw io_error("write failed on " + path);
}

void save_dataset(const std::vector<Maneuver>& maneuvers, const std::string& path) {
  std::uint16_t l = 0, t = 0;
  if (!maneuvers.empty()) {
    if (maneuvers.front().channels > 0xffff || maneuvers.front().length > 0xffff)
      throw shape_error("save_dataset: channel count and length must fit in 16 bits");
    l = static_cast<std::uint16_t>(maneuvers.front().channels);
    t = static_cast<std::uint16_t>(maneuvers.front().length);
  }
  std::string buf;
  buf.reserve(kHeaderSize + 4ull * maneuvers.size() * l * t);
  buf.append("SILD", 4);
  put_u32(buf, kContainerVersion);
  put_u32(buf, static_cast<std::uint32_t>(maneuvers.size()));
  put_u16(buf, l);
  put_u16(buf, t);
  for (const Maneuver& m : maneuvers) {
    if (m.channels != l || m.length != t)
      throw shape_error("save_dataset: all maneuvers must share channel count and length");
    for (float v : m.values) put_f32(buf, v);
  }
  write_file(path, buf);
}

std::vector<Maneuver> load_dataset(const std::string& path) {
  const std::string data = read_file(path);
  reader r(data, path);
  std::uint32_t count;
  std::uint16_t l, t;
  check_header(r, path, "SILD", count, l, t);
  const std::size_t expect = kHeaderSize + 4ull * count * l * t;
  if (data.size() != expect)
    throw truncation_error(path + ": expected " + std::to_string(expect) +
                           " bytes for " + std::to_string(count) + " records but file has " +
                           std::to_string(data.size()));
  std::vector<Maneuver> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Maneuver m(l, t);
    r.floats(m.values.data(), static_cast<std::size_t>(l) * t);
    out.push_back(std::move(m));
  }
  return out;
}

void save_templates(const std::vector<Template>& templates, const std::string& path) {
  std::uint16_t t = 0;
  if (!templates.empty()) {
    if (templates.front().values.size() > 0xffff)
      throw shape_error("save_templates: length must fit in 16 bits");
    t = static_cast<std::uint16_t>(templates.front().values.size());
  }
  std::string buf;
  buf.append("SILT", 4);
  put_u32(buf, kContainerVersion);
  put_u32(buf, static_cast<std::uint32_t>(templates.size()));
  put_u16(buf, 1);
  put_u16(buf, t);
  for (const Template& tpl : templates) {
    if (tpl.values.size() != t)
      throw shape_error("save_templates: all templates must share length");
    for (float v : tpl.values) put_f32(buf, v);
    put_u32(buf, static_cast<std::uint32_t>(tpl.signal_index));
    put_u32(buf, static_cast<std::uint32_t>(tpl.breakpoints.size()));
    for (const Breakpoint& bp : tpl.breakpoints) {
      put_u32(buf, static_cast<std::uint32_t>(bp.t));
      put_f32(buf, bp.value);
    }
  }
  write_file(path, buf);
}

std::vector<Template> load_templates(const std::string& path) {
  const std::string data = read_file(path);
  reader r(data, path);
  std::uint32_t count;
  std::uint16_t l, t;
  check_header(r, path, "SILT", count, l, t);
  std::vector<Template> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Template tpl;
    tpl.values.resize(t);
    r.floats(tpl.values.data(), t);
    tpl.signal_index = r.u32();
    const std::uint32_t n_bp = r.u32();
    tpl.breakpoints.reserve(n_bp);
    for (std::uint32_t k = 0; k < n_bp; ++k) {
      Breakpoint bp;
      bp.t = r.u32();
      bp.value = r.f32();
      tpl.breakpoints.push_back(bp);
    }
    validate_template(tpl);
    out.push_back(std::move(tpl));
  }
  return out;
}

namespace {

Template template_from_json_value(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("signal_index") || !j.contains("breakpoints"))
    throw io_error("template json: need 'signal_index' and 'breakpoints' fields");
  std::vector<Breakpoint> bps;
  for (const auto& e : j.at("breakpoints")) {
    if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() || !e.at(1).is_number())
      throw io_error("template json: each breakpoint must be a [time, value] pair");
    const auto t = e.at(0).get<long long>();
    if (t < 0) throw io_error("template json: breakpoint times must be nonnegative");
    bps.push_back({static_cast<std::size_t>(t), e.at(1).get<float>()});
  }
  const auto idx = j.at("signal_index").get<long long>();
  if (idx < 0) throw io_error("template json: signal_index must be nonnegative");
  return make_template(std::move(bps), static_cast<std::size_t>(idx));
}

nlohmann::json parse_json(const std::string& text, const std::string& where) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw io_error(where + ": " + e.what());
  }
}

}  // namespace

Template template_from_json(const std::string& json_text) {
  return template_from_json_value(parse_json(json_text, "template json"));
}

std::string template_to_json(const Template& t) {
  nlohmann::json j;
  j["signal_index"] = t.signal_index;
  nlohmann::json bps = nlohmann::json::array();
  for (const Breakpoint& bp : t.breakpoints) bps.push_back({bp.t, bp.value});
  j["breakpoints"] = bps;
  return j.dump(2) + "\n";
}

std::vector<Template> load_templates_json(const std::string& path) {
  const nlohmann::json j = parse_json(read_file(path), path);
  std::vector<Template> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(template_from_json_value(e));
  } else {
    out.push_back(template_from_json_value(j));
  }
  return out;
}

}  // namespace silgan::io
