#include "silgan/model_core.hpp"

#include <algorithm>
#include <cstring>

#include <json.hpp>

#include "silgan/sild_io.hpp"

namespace silgan::model {

namespace {

std::int64_t stage_width(const ModelConfig& cfg, std::int64_t stage) {
  return std::min(cfg.base_width << stage, 4 * cfg.base_width);
}

void check_timeline(const ModelConfig& cfg, const torch::Tensor& x,
                    std::int64_t want_channels, const char* who) {
  if (x.dim() != 3 || x.size(1) != want_channels)
    throw shape_error(std::string(who) + ": expected (B, " +
                      std::to_string(want_channels) + ", T) input");
  const std::int64_t t = x.size(2);
  if (!is_power_of_two(static_cast<std::uint64_t>(t)) || t > cfg.n ||
      t < (1 << cfg.depth))
    throw shape_error(std::string(who) + ": length " + std::to_string(t) +
                      " must be a power of two in [2^depth, " + std::to_string(cfg.n) +
                      "]");
}

torch::Tensor fold_rows(const torch::Tensor& x, std::int64_t rows, const char* who) {
  if (x.size(2) % rows != 0)
    throw shape_error(std::string(who) + ": length " + std::to_string(x.size(2)) +
                      " not divisible by " + std::to_string(rows) + " stack rows");
  return x.reshape({x.size(0), x.size(1), rows, x.size(2) / rows});
}

void append_params(std::vector<torch::Tensor>& out, const torch::nn::Module& m) {
  for (const torch::Tensor& p : m.parameters()) out.push_back(p);
}

}  // namespace

ModelConfig ModelConfig::defaults() { return {}; }

ModelConfig ModelConfig::desk() {
  ModelConfig c;
  c.n = 128;
  c.m = 256;
  c.depth = 3;
  c.base_width = 16;
  return c;
}

ModelConfig ModelConfig::tiny() {
  ModelConfig c;
  c.n = 32;
  c.m = 64;
  c.depth = 2;
  c.base_width = 8;
  return c;
}

void validate_model_config(const ModelConfig& cfg) {
  if (cfg.channels <= 0) throw config_error("model config: channels must be positive");
  if (!is_power_of_two(static_cast<std::uint64_t>(cfg.n)) ||
      !is_power_of_two(static_cast<std::uint64_t>(cfg.m)))
    throw config_error("model config: N and M must be powers of two");
  if (cfg.n > cfg.m) throw config_error("model config: N must not exceed M");
  if (cfg.depth < 1 || (cfg.n >> cfg.depth) < 1)
    throw config_error("model config: depth too large for N");
  if (cfg.base_width < 1) throw config_error("model config: base_width must be positive");
  if (cfg.kernel < 1 || cfg.kernel % 2 == 0)
    throw config_error("model config: kernel must be odd");
  if (cfg.style_dim < 1 || cfg.expansion_dim < 1)
    throw config_error("model config: code dimensions must be positive");
  if (cfg.stack_rows < 1 || cfg.n % cfg.stack_rows != 0 ||
      cfg.m % cfg.stack_rows != 0 ||
      (cfg.m > cfg.n && (cfg.m - cfg.n) % cfg.stack_rows != 0))
    throw config_error("model config: stack_rows must divide N, M and M-N");
  const LossWeights& w = cfg.weights;
  if (w.gen < 0 || w.pair < 0 || w.cyc < 0 || w.id < 0 || w.cr < 0)
    throw config_error("model config: loss weights must be nonnegative");
}

// -- translation-stage networks ----------------------------------------------

TemplateEncoderImpl::TemplateEncoderImpl(const ModelConfig& config) : cfg(config) {
  const std::int64_t pad = cfg.kernel / 2;
  torch::nn::Sequential seq;
  // No per-sample normalization anywhere in the translation nets: a
  // signal's absolute level is content here, and instance-style norms would
  // discard exactly that (a constant-0.1 and a constant-0.7 template must
  // not encode alike).
  seq->push_back(torch::nn::Conv1d(
      torch::nn::Conv1dOptions(1 + cfg.channels, cfg.base_width, cfg.kernel).padding(pad)));
  seq->push_back(torch::nn::ReLU());
  for (std::int64_t s = 1; s <= cfg.depth; ++s) {
    seq->push_back(torch::nn::Conv1d(torch::nn::Conv1dOptions(stage_width(cfg, s - 1),
                                                              stage_width(cfg, s),
                                                              cfg.kernel)
                                         .stride(2)
                                         .padding(pad)));
    seq->push_back(torch::nn::ReLU());
  }
  net = register_module("net", seq);
}

torch::Tensor TemplateEncoderImpl::forward(const torch::Tensor& x1,
                                           const torch::Tensor& signal_index) {
  check_timeline(cfg, x1, 1, "template encoder");
  if (signal_index.dim() != 1 || signal_index.size(0) != x1.size(0))
    throw shape_error("template encoder: signal_index must be one index per sample");
  const torch::Tensor onehot =
      torch::one_hot(signal_index, cfg.channels).to(x1.dtype());
  const torch::Tensor cond =
      onehot.unsqueeze(-1).expand({x1.size(0), cfg.channels, x1.size(2)});
  return net->forward(torch::cat({x1, cond}, 1));
}

TemplateDecoderImpl::TemplateDecoderImpl(const ModelConfig& cfg) {
  torch::nn::Sequential seq;
  std::int64_t w = cfg.content_width();
  for (std::int64_t s = 0; s < cfg.depth; ++s) {
    const std::int64_t next = std::max(w / 2, cfg.base_width);
    seq->push_back(torch::nn::ConvTranspose1d(
        torch::nn::ConvTranspose1dOptions(w, next, 4).stride(2).padding(1)));
    seq->push_back(torch::nn::ReLU());
    w = next;
  }
  seq->push_back(torch::nn::Conv1d(
      torch::nn::Conv1dOptions(w, 1, cfg.kernel).padding(cfg.kernel / 2)));
  seq->push_back(torch::nn::Sigmoid());
  net = register_module("net", seq);
}

torch::Tensor TemplateDecoderImpl::forward(const torch::Tensor& c1) {
  if (c1.dim() != 3) throw shape_error("template decoder: expected (B, C, T) code");
  return net->forward(c1);
}

ManeuverGeneratorImpl::ManeuverGeneratorImpl(const ModelConfig& config) : cfg(config) {
  std::int64_t w = cfg.content_width();
  for (std::int64_t s = 0; s < cfg.depth; ++s) {
    const std::int64_t next = std::max(w / 2, cfg.base_width);
    torch::nn::Sequential stage;
    stage->push_back(torch::nn::ConvTranspose1d(
        torch::nn::ConvTranspose1dOptions(w + cfg.style_dim, next, 4).stride(2).padding(
            1)));
    stage->push_back(torch::nn::ReLU());
    stages.push_back(register_module("stage" + std::to_string(s), stage));
    w = next;
  }
  head = register_module(
      "head", torch::nn::Conv1d(
                  torch::nn::Conv1dOptions(w, cfg.channels, cfg.kernel).padding(
                      cfg.kernel / 2)));
}

torch::Tensor ManeuverGeneratorImpl::forward(const torch::Tensor& c1,
                                             const torch::Tensor& c2) {
  if (c1.dim() != 3 || c1.size(1) != cfg.content_width())
    throw shape_error("maneuver generator: bad content code shape");
  if (c2.dim() != 2 || c2.size(1) != cfg.style_dim || c2.size(0) != c1.size(0))
    throw shape_error("maneuver generator: bad style code shape");
  torch::Tensor h = c1;
  for (auto& stage : stages) {
    const torch::Tensor style =
        c2.unsqueeze(-1).expand({h.size(0), cfg.style_dim, h.size(2)});
    h = stage->forward(torch::cat({h, style}, 1));
  }
  return torch::sigmoid(head->forward(h));
}

ManeuverEncoderImpl::ManeuverEncoderImpl(const ModelConfig& config) : cfg(config) {
  const std::int64_t pad = cfg.kernel / 2;
  torch::nn::Sequential c;
  c->push_back(torch::nn::Conv1d(
      torch::nn::Conv1dOptions(cfg.channels, cfg.base_width, cfg.kernel).padding(pad)));
  c->push_back(torch::nn::ReLU());
  for (std::int64_t s = 1; s <= cfg.depth; ++s) {
    c->push_back(torch::nn::Conv1d(torch::nn::Conv1dOptions(stage_width(cfg, s - 1),
                                                            stage_width(cfg, s),
                                                            cfg.kernel)
                                       .stride(2)
                                       .padding(pad)));
    c->push_back(torch::nn::ReLU());
  }
  content = register_module("content", c);

  torch::nn::Sequential s;
  std::int64_t w = cfg.channels;
  for (int i = 0; i < 3; ++i) {
    s->push_back(torch::nn::Conv1d(
        torch::nn::Conv1dOptions(w, cfg.base_width, cfg.kernel).stride(2).padding(pad)));
    s->push_back(torch::nn::ReLU());
    w = cfg.base_width;
  }
  style_trunk = register_module("style_trunk", s);
  style_head = register_module("style_head",
                               torch::nn::Linear(cfg.base_width, cfg.style_dim));
}

std::pair<torch::Tensor, torch::Tensor> ManeuverEncoderImpl::forward(
    const torch::Tensor& x) {
  check_timeline(cfg, x, cfg.channels, "maneuver encoder");
  const torch::Tensor c1 = content->forward(x);
  torch::Tensor s = style_trunk->forward(x);
  s = s.mean(/*dim=*/2);
  return {c1, style_head->forward(s)};
}

ManeuverDiscriminatorImpl::ManeuverDiscriminatorImpl(const ModelConfig& cfg) {
  const std::int64_t pad = cfg.kernel / 2;
  torch::nn::Sequential seq;
  std::int64_t w = cfg.channels;
  for (std::int64_t s = 1; s <= cfg.depth; ++s) {
    seq->push_back(torch::nn::Conv1d(
        torch::nn::Conv1dOptions(w, stage_width(cfg, s), cfg.kernel).stride(2).padding(
            pad)));
    seq->push_back(torch::nn::LeakyReLU(torch::nn::LeakyReLUOptions().negative_slope(0.2)));
    w = stage_width(cfg, s);
  }
  seq->push_back(
      torch::nn::Conv1d(torch::nn::Conv1dOptions(w, 1, cfg.kernel).padding(pad)));
  net = register_module("net", seq);
}

torch::Tensor ManeuverDiscriminatorImpl::forward(const torch::Tensor& x) {
  return net->forward(x).mean(/*dim=*/{1, 2});
}

// -- expansion-stage networks -------------------------------------------------

FlankGeneratorImpl::FlankGeneratorImpl(const ModelConfig& config) : cfg(config) {
  const std::int64_t w = cfg.base_width;
  torch::nn::Sequential seq;
  seq->push_back(torch::nn::Conv2d(
      torch::nn::Conv2dOptions(cfg.channels + cfg.expansion_dim, w, 3).padding(1)));
  seq->push_back(torch::nn::ReLU());
  for (int i = 0; i < 2; ++i) {
    seq->push_back(torch::nn::Conv2d(torch::nn::Conv2dOptions(w, w, 3).padding(1)));
    seq->push_back(torch::nn::ReLU());
  }
  seq->push_back(
      torch::nn::Conv2d(torch::nn::Conv2dOptions(w, 2 * cfg.channels, 3).padding(1)));
  seq->push_back(torch::nn::Sigmoid());
  net = register_module("net", seq);
}

std::pair<torch::Tensor, torch::Tensor> FlankGeneratorImpl::forward(
    const torch::Tensor& x12, const torch::Tensor& c3) {
  check_timeline(cfg, x12, cfg.channels, "flank generator");
  if (c3.dim() != 2 || c3.size(1) != cfg.expansion_dim || c3.size(0) != x12.size(0))
    throw shape_error("flank generator: bad expansion code shape");
  const torch::Tensor grid = fold_rows(x12, cfg.stack_rows, "flank generator");
  const torch::Tensor code = c3.unsqueeze(-1).unsqueeze(-1).expand(
      {x12.size(0), cfg.expansion_dim, grid.size(2), grid.size(3)});
  torch::Tensor y = net->forward(torch::cat({grid, code}, 1));
  y = y.reshape({x12.size(0), 2 * cfg.channels, x12.size(2)});
  const std::int64_t flank_len = cfg.m - cfg.n;
  if (y.size(2) != flank_len) {
    namespace F = torch::nn::functional;
    y = F::interpolate(y, F::InterpolateFuncOptions()
                              .size(std::vector<std::int64_t>{flank_len})
                              .mode(torch::kLinear)
                              .align_corners(false));
  }
  return {y.narrow(1, 0, cfg.channels), y.narrow(1, cfg.channels, cfg.channels)};
}

FlankEncoderImpl::FlankEncoderImpl(const ModelConfig& config) : cfg(config) {
  const std::int64_t w = cfg.base_width;
  torch::nn::Sequential seq;
  seq->push_back(torch::nn::Conv2d(
      torch::nn::Conv2dOptions(2 * cfg.channels, w, 3).stride(2).padding(1)));
  seq->push_back(torch::nn::ReLU());
  seq->push_back(torch::nn::Conv2d(torch::nn::Conv2dOptions(w, w, 3).stride(2).padding(1)));
  seq->push_back(torch::nn::ReLU());
  trunk = register_module("trunk", seq);
  head = register_module("head", torch::nn::Linear(w, cfg.expansion_dim));
}

torch::Tensor FlankEncoderImpl::forward(const torch::Tensor& flanks) {
  if (flanks.dim() != 3 || flanks.size(1) != 2 * cfg.channels ||
      flanks.size(2) != cfg.m - cfg.n)
    throw shape_error("flank encoder: expected (B, 2L, M-N) input");
  const torch::Tensor grid = fold_rows(flanks, cfg.stack_rows, "flank encoder");
  torch::Tensor h = trunk->forward(grid);
  h = h.mean(/*dim=*/{2, 3});
  return head->forward(h);
}

ExpansionDiscriminatorImpl::ExpansionDiscriminatorImpl(const ModelConfig& config)
    : cfg(config) {
  const std::int64_t w = cfg.base_width;
  torch::nn::Sequential seq;
  seq->push_back(torch::nn::Conv2d(
      torch::nn::Conv2dOptions(cfg.channels, w, 3).stride(2).padding(1)));
  seq->push_back(torch::nn::LeakyReLU(torch::nn::LeakyReLUOptions().negative_slope(0.2)));
  seq->push_back(
      torch::nn::Conv2d(torch::nn::Conv2dOptions(w, 2 * w, 3).stride(2).padding(1)));
  seq->push_back(torch::nn::LeakyReLU(torch::nn::LeakyReLUOptions().negative_slope(0.2)));
  seq->push_back(
      torch::nn::Conv2d(torch::nn::Conv2dOptions(2 * w, 2 * w, 3).stride(2).padding(1)));
  seq->push_back(torch::nn::LeakyReLU(torch::nn::LeakyReLUOptions().negative_slope(0.2)));
  seq->push_back(torch::nn::Conv2d(torch::nn::Conv2dOptions(2 * w, 1, 3).padding(1)));
  net = register_module("net", seq);
}

torch::Tensor ExpansionDiscriminatorImpl::forward(const torch::Tensor& x) {
  if (x.dim() != 3 || x.size(1) != cfg.channels || x.size(2) != cfg.m)
    throw shape_error("expansion discriminator: expected (B, L, M) input");
  const torch::Tensor grid = fold_rows(x, cfg.stack_rows, "expansion discriminator");
  return net->forward(grid).mean(/*dim=*/{1, 2, 3});
}

// -- model wrapper ------------------------------------------------------------

ModelImpl::ModelImpl(ModelConfig config) : cfg(std::move(config)) {
  validate_model_config(cfg);
  e1 = register_module("e1", TemplateEncoder(cfg));
  g1 = register_module("g1", TemplateDecoder(cfg));
  e2 = register_module("e2", ManeuverEncoder(cfg));
  g2 = register_module("g2", ManeuverGenerator(cfg));
  g3 = register_module("g3", FlankGenerator(cfg));
  e3 = register_module("e3", FlankEncoder(cfg));
  d2 = register_module("d2", ManeuverDiscriminator(cfg));
  d3 = register_module("d3", ExpansionDiscriminator(cfg));
}

torch::Tensor ModelImpl::encode_template(const torch::Tensor& x1,
                                         const torch::Tensor& signal_index) {
  return e1->forward(x1, signal_index);
}
torch::Tensor ModelImpl::generate_maneuver(const torch::Tensor& c1,
                                           const torch::Tensor& c2) {
  return g2->forward(c1, c2);
}
std::pair<torch::Tensor, torch::Tensor> ModelImpl::encode_maneuver(
    const torch::Tensor& x) {
  return e2->forward(x);
}
torch::Tensor ModelImpl::decode_template(const torch::Tensor& c1) {
  return g1->forward(c1);
}
torch::Tensor ModelImpl::discriminate(const torch::Tensor& x) { return d2->forward(x); }
torch::Tensor ModelImpl::discriminate_expansion(const torch::Tensor& x) {
  return d3->forward(x);
}
std::pair<torch::Tensor, torch::Tensor> ModelImpl::expand(const torch::Tensor& x12,
                                                          const torch::Tensor& c3) {
  return g3->forward(x12, c3);
}
torch::Tensor ModelImpl::encode_flanks(const torch::Tensor& flanks) {
  return e3->forward(flanks);
}

std::vector<torch::Tensor> ModelImpl::generator_parameters() const {
  std::vector<torch::Tensor> out;
  append_params(out, *e1);
  append_params(out, *g1);
  append_params(out, *e2);
  append_params(out, *g2);
  append_params(out, *g3);
  append_params(out, *e3);
  return out;
}

std::vector<torch::Tensor> ModelImpl::discriminator_parameters() const {
  std::vector<torch::Tensor> out;
  append_params(out, *d2);
  append_params(out, *d3);
  return out;
}

Model make_model(const ModelConfig& cfg, std::uint64_t seed) {
  torch::manual_seed(seed);
  return Model(cfg);
}

torch::Tensor assemble_and_crop(const torch::Tensor& f1, const torch::Tensor& x12,
                                const torch::Tensor& f2, std::int64_t p) {
  if (f1.dim() != 3 || f2.dim() != 3 || x12.dim() != 3)
    throw shape_error("assemble_and_crop: expected (B, L, T) parts");
  if (f1.sizes() != f2.sizes() || f1.size(0) != x12.size(0) ||
      f1.size(1) != x12.size(1))
    throw shape_error("assemble_and_crop: part shapes disagree");
  const std::int64_t flank = f1.size(2);
  const std::int64_t m = flank + x12.size(2);
  if (p < 0 || p > flank)
    throw param_error("assemble_and_crop: p must lie in [0, M-N], got " +
                      std::to_string(p));
  return torch::cat({f1, x12, f2}, 2).narrow(2, p, m);
}

// -- loss terms ---------------------------------------------------------------

torch::Tensor lsgan_gen_translation(const torch::Tensor& d2_fake) {
  return (d2_fake - 1).pow(2).mean();
}

torch::Tensor lsgan_dis_translation(const torch::Tensor& d2_real,
                                    const torch::Tensor& d2_fake) {
  return (d2_real - 1).pow(2).mean() + d2_fake.pow(2).mean();
}

torch::Tensor pairing_loss(const torch::Tensor& x12, const torch::Tensor& x2,
                           const torch::Tensor& signal_index) {
  if (x12.sizes() != x2.sizes())
    throw shape_error("pairing_loss: translated and real batch shapes disagree");
  if (signal_index.dim() != 1 || signal_index.size(0) != x12.size(0))
    throw shape_error("pairing_loss: one channel index per sample required");
  const torch::Tensor idx =
      signal_index.view({-1, 1, 1}).expand({x12.size(0), 1, x12.size(2)});
  const torch::Tensor a = x12.gather(1, idx);
  const torch::Tensor b = x2.gather(1, idx);
  return (a - b).abs().mean();
}

torch::Tensor cycle_loss(const torch::Tensor& x121, const torch::Tensor& x1) {
  if (x121.sizes() != x1.sizes())
    throw shape_error("cycle_loss: template batch shapes disagree");
  return (x121 - x1).abs().mean();
}

torch::Tensor lsgan_gen_expansion(const torch::Tensor& d3_fake) {
  return (d3_fake - 1).pow(2).mean();
}

torch::Tensor lsgan_dis_expansion(const torch::Tensor& d3_real,
                                  const torch::Tensor& d3_fake) {
  return (d3_real - 1).pow(2).mean() + d3_fake.pow(2).mean();
}

torch::Tensor identity_recon(const torch::Tensor& x, const torch::Tensor& x_rec) {
  if (x.sizes() != x_rec.sizes())
    throw shape_error("identity_recon: shapes disagree");
  return (x - x_rec).abs().mean();
}

torch::Tensor code_recon_translation(const torch::Tensor& c1, const torch::Tensor& c2,
                                     const torch::Tensor& c1_hat,
                                     const torch::Tensor& c2_hat) {
  if (c1.sizes() != c1_hat.sizes() || c2.sizes() != c2_hat.sizes())
    throw shape_error("code_recon_translation: code shapes disagree");
  return torch::cat({(c1 - c1_hat).flatten(), (c2 - c2_hat).flatten()}).abs().mean();
}

torch::Tensor code_recon_expansion(const torch::Tensor& c3, const torch::Tensor& c3_hat) {
  if (c3.sizes() != c3_hat.sizes())
    throw shape_error("code_recon_expansion: code shapes disagree");
  return (c3 - c3_hat).abs().mean();
}

torch::Tensor generator_objective(const GenTerms& t, const LossWeights& w) {
  return w.gen * (t.gen_tran + t.gen_exp) + w.pair * t.pair + w.cyc * t.cyc +
         w.id * (t.id1 + t.id2) + w.cr * (t.cr2 + t.cr3);
}

torch::Tensor discriminator_objective(const DisTerms& t) {
  return t.dis_tran + t.dis_exp;
}

// -- checkpointing ------------------------------------------------------------

namespace {

constexpr char kCheckpointMagic[] = "SILC";
constexpr std::uint32_t kCheckpointVersion = 1;

nlohmann::json config_to_json(const ModelConfig& cfg) {
  nlohmann::json j;
  j["channels"] = cfg.channels;
  j["n"] = cfg.n;
  j["m"] = cfg.m;
  j["depth"] = cfg.depth;
  j["base_width"] = cfg.base_width;
  j["kernel"] = cfg.kernel;
  j["style_dim"] = cfg.style_dim;
  j["expansion_dim"] = cfg.expansion_dim;
  j["stack_rows"] = cfg.stack_rows;
  j["weights"] = {{"gen", cfg.weights.gen},
                  {"pair", cfg.weights.pair},
                  {"cyc", cfg.weights.cyc},
                  {"id", cfg.weights.id},
                  {"cr", cfg.weights.cr}};
  return j;
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig cfg;
  cfg.channels = j.at("channels").get<std::int64_t>();
  cfg.n = j.at("n").get<std::int64_t>();
  cfg.m = j.at("m").get<std::int64_t>();
  cfg.depth = j.at("depth").get<std::int64_t>();
  cfg.base_width = j.at("base_width").get<std::int64_t>();
  cfg.kernel = j.at("kernel").get<std::int64_t>();
  cfg.style_dim = j.at("style_dim").get<std::int64_t>();
  cfg.expansion_dim = j.at("expansion_dim").get<std::int64_t>();
  cfg.stack_rows = j.at("stack_rows").get<std::int64_t>();
  const auto& w = j.at("weights");
  cfg.weights.gen = w.at("gen").get<double>();
  cfg.weights.pair = w.at("pair").get<double>();
  cfg.weights.cyc = w.at("cyc").get<double>();
  cfg.weights.id = w.at("id").get<double>();
  cfg.weights.cr = w.at("cr").get<double>();
  return cfg;
}

}  // namespace

void save_checkpoint(const Model& model, const std::string& path) {
  nlohmann::json manifest;
  manifest["config"] = config_to_json(model->cfg);
  nlohmann::json tensors = nlohmann::json::array();
  std::string payload;
  for (const auto& named : model->named_parameters()) {
    const torch::Tensor t = named.value().detach().to(torch::kFloat32).contiguous();
    nlohmann::json entry;
    entry["name"] = named.key();
    entry["shape"] = std::vector<std::int64_t>(t.sizes().begin(), t.sizes().end());
    tensors.push_back(entry);
    const std::size_t bytes = static_cast<std::size_t>(t.numel()) * 4;
    const std::size_t at = payload.size();
    payload.resize(at + bytes);
    std::memcpy(payload.data() + at, t.data_ptr<float>(), bytes);
  }
  manifest["tensors"] = tensors;
  const std::string mtext = manifest.dump();

  std::string buf;
  buf.append(kCheckpointMagic, 4);
  for (int i = 0; i < 4; ++i)
    buf.push_back(static_cast<char>((kCheckpointVersion >> (8 * i)) & 0xff));
  const std::uint64_t mlen = mtext.size();
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((mlen >> (8 * i)) & 0xff));
  buf += mtext;
  buf += payload;
  io::write_file(path, buf);
}

Model load_checkpoint(const std::string& path) {
  const std::string data = io::read_file(path);
  if (data.size() < 16)
    throw truncation_error(path + ": shorter than a checkpoint header");
  if (data.compare(0, 4, kCheckpointMagic) != 0)
    throw magic_error(path + ": bad magic '" + data.substr(0, 4) + "', expected '" +
                      kCheckpointMagic + "'");
  std::uint32_t version = 0;
  for (int i = 3; i >= 0; --i)
    version = (version << 8) | static_cast<unsigned char>(data[4 + i]);
  if (version != kCheckpointVersion)
    throw version_error(path + ": unsupported checkpoint version " +
                        std::to_string(version));
  std::uint64_t mlen = 0;
  for (int i = 7; i >= 0; --i)
    mlen = (mlen << 8) | static_cast<unsigned char>(data[8 + i]);
  if (16 + mlen > data.size())
    throw truncation_error(path + ": manifest extends past end of file");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(data.substr(16, mlen));
  } catch (const nlohmann::json::parse_error& e) {
    throw io_error(path + ": bad checkpoint manifest: " + e.what());
  }

  Model model(config_from_json(manifest.at("config")));
  auto params = model->named_parameters();
  std::size_t at = 16 + mlen;
  torch::NoGradGuard no_grad;
  for (const auto& entry : manifest.at("tensors")) {
    const std::string name = entry.at("name").get<std::string>();
    const auto shape = entry.at("shape").get<std::vector<std::int64_t>>();
    torch::Tensor* dst = params.find(name);
    if (dst == nullptr)
      throw io_error(path + ": checkpoint names unknown tensor '" + name + "'");
    if (std::vector<std::int64_t>(dst->sizes().begin(), dst->sizes().end()) != shape)
      throw io_error(path + ": shape mismatch for tensor '" + name + "'");
    std::size_t numel = 1;
    for (std::int64_t d : shape) numel *= static_cast<std::size_t>(d);
    if (at + numel * 4 > data.size())
      throw truncation_error(path + ": payload truncated at tensor '" + name +
                             "', expected " + std::to_string(at + numel * 4) +
                             " bytes but file has " + std::to_string(data.size()));
    torch::Tensor src = torch::empty(torch::IntArrayRef(shape), torch::kFloat32);
    std::memcpy(src.data_ptr<float>(), data.data() + at, numel * 4);
    dst->copy_(src);
    at += numel * 4;
  }
  if (at != data.size())
    throw io_error(path + ": trailing bytes after checkpoint payload");
  return model;
}

}  // namespace silgan::model
