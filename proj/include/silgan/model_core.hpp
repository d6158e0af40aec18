#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <torch/torch.h>

#include "silgan/common.hpp"

namespace silgan::model {

struct LossWeights {
  double gen = 1.0;   // adversarial generator terms (translation + expansion)
  double pair = 1.0;  // channel-l pairing
  double cyc = 1.0;   // template cycle reconstruction
  double id = 10.0;   // within-domain identity reconstruction
  double cr = 1.0;    // code reconstruction (style + expansion codes)
};

/// Shared architecture/config for the translation and expansion stages.
/// Translation nets are fully convolutional and accept any power-of-two
/// input length up to `n`; expansion is built for the fixed pair (n, m).
struct ModelConfig {
  std::int64_t channels = 3;       // L
  std::int64_t n = 512;            // template/snippet length N
  std::int64_t m = 1024;           // expanded maneuver length M
  std::int64_t depth = 4;          // stride-2 stages in the 1-D nets
  std::int64_t base_width = 64;
  std::int64_t kernel = 5;         // odd
  std::int64_t style_dim = 8;      // d_s
  std::int64_t expansion_dim = 8;  // d_e
  std::int64_t stack_rows = 8;     // rows when folding a timeline for 2-D convs
  LossWeights weights;

  static ModelConfig defaults();  // full scale
  static ModelConfig desk();      // CPU-trainable scale (N=128, M=256)
  static ModelConfig tiny();      // gradient-check scale (N=32)

  /// Channel count of the content code feature map.
  std::int64_t content_width() const {
    return std::min(base_width << depth, 4 * base_width);
  }
  /// Temporal length of the content code for an input of length `n_in`.
  std::int64_t content_len(std::int64_t n_in) const { return n_in >> depth; }
};

/// Throws config_error unless N, M are powers of two, N <= M, the stack/
/// stride factors divide the lengths, and all loss weights are >= 0.
void validate_model_config(const ModelConfig& cfg);

// -- networks ---------------------------------------------------------------

/// Template encoder: (B,1,N) values + per-sample signal index -> content
/// code (B, C_c, N/2^d). The signal index enters as L constant one-hot
/// channels so one encoder serves all signals.
struct TemplateEncoderImpl : torch::nn::Module {
  explicit TemplateEncoderImpl(const ModelConfig& cfg);
  torch::Tensor forward(const torch::Tensor& x1, const torch::Tensor& signal_index);
  ModelConfig cfg;
  torch::nn::Sequential net{nullptr};
};
TORCH_MODULE(TemplateEncoder);

/// Template decoder: content code -> (B,1,N) values in [0,1].
struct TemplateDecoderImpl : torch::nn::Module {
  explicit TemplateDecoderImpl(const ModelConfig& cfg);
  torch::Tensor forward(const torch::Tensor& c1);
  torch::nn::Sequential net{nullptr};
};
TORCH_MODULE(TemplateDecoder);

/// Maneuver generator: (content code, style code) -> (B,L,N) in [0,1].
/// The style code is broadcast along time and re-injected at every scale.
struct ManeuverGeneratorImpl : torch::nn::Module {
  explicit ManeuverGeneratorImpl(const ModelConfig& cfg);
  torch::Tensor forward(const torch::Tensor& c1, const torch::Tensor& c2);
  ModelConfig cfg;
  std::vector<torch::nn::Sequential> stages;
  torch::nn::Conv1d head{nullptr};
};
TORCH_MODULE(ManeuverGenerator);

/// Maneuver encoder: (B,L,N) -> (content code, style code).
struct ManeuverEncoderImpl : torch::nn::Module {
  explicit ManeuverEncoderImpl(const ModelConfig& cfg);
  std::pair<torch::Tensor, torch::Tensor> forward(const torch::Tensor& x);
  ModelConfig cfg;
  torch::nn::Sequential content{nullptr};
  torch::nn::Sequential style_trunk{nullptr};
  torch::nn::Linear style_head{nullptr};
};
TORCH_MODULE(ManeuverEncoder);

/// Patch discriminator for N-length maneuvers; returns one score per sample
/// (mean of the patch score map).
struct ManeuverDiscriminatorImpl : torch::nn::Module {
  explicit ManeuverDiscriminatorImpl(const ModelConfig& cfg);
  torch::Tensor forward(const torch::Tensor& x);
  torch::nn::Sequential net{nullptr};
};
TORCH_MODULE(ManeuverDiscriminator);

/// Flank generator: (B,L,N) maneuver + expansion code -> two flanks of
/// length M-N each. The timeline is folded into `stack_rows` rows and
/// processed with 2-D kernels; both flanks come from one forward pass.
struct FlankGeneratorImpl : torch::nn::Module {
  explicit FlankGeneratorImpl(const ModelConfig& cfg);
  std::pair<torch::Tensor, torch::Tensor> forward(const torch::Tensor& x12,
                                                  const torch::Tensor& c3);
  ModelConfig cfg;
  torch::nn::Sequential net{nullptr};
};
TORCH_MODULE(FlankGenerator);

/// Flank encoder: concatenated flanks (B,2L,M-N) -> expansion code.
struct FlankEncoderImpl : torch::nn::Module {
  explicit FlankEncoderImpl(const ModelConfig& cfg);
  torch::Tensor forward(const torch::Tensor& flanks);
  ModelConfig cfg;
  torch::nn::Sequential trunk{nullptr};
  torch::nn::Linear head{nullptr};
};
TORCH_MODULE(FlankEncoder);

/// Patch discriminator for M-length maneuvers (2-D on the folded timeline).
struct ExpansionDiscriminatorImpl : torch::nn::Module {
  explicit ExpansionDiscriminatorImpl(const ModelConfig& cfg);
  torch::Tensor forward(const torch::Tensor& x);
  ModelConfig cfg;
  torch::nn::Sequential net{nullptr};
};
TORCH_MODULE(ExpansionDiscriminator);

// -- the full model ----------------------------------------------------------

struct ModelImpl : torch::nn::Module {
  explicit ModelImpl(ModelConfig cfg);

  /// E1: (B,1,N) + per-sample signal index (B) -> content code.
  torch::Tensor encode_template(const torch::Tensor& x1,
                                const torch::Tensor& signal_index);
  /// G2: (content, style) -> (B,L,N).
  torch::Tensor generate_maneuver(const torch::Tensor& c1, const torch::Tensor& c2);
  /// E2: (B,L,N) -> (content, style).
  std::pair<torch::Tensor, torch::Tensor> encode_maneuver(const torch::Tensor& x);
  /// G1: content -> (B,1,N).
  torch::Tensor decode_template(const torch::Tensor& c1);
  /// D2: (B,L,N) -> (B) scores.
  torch::Tensor discriminate(const torch::Tensor& x);
  /// D3: (B,L,M) -> (B) scores.
  torch::Tensor discriminate_expansion(const torch::Tensor& x);
  /// G3: ((B,L,N), expansion code) -> flanks (B,L,M-N) x2.
  std::pair<torch::Tensor, torch::Tensor> expand(const torch::Tensor& x12,
                                                 const torch::Tensor& c3);
  /// E3: concatenated flanks (B,2L,M-N) -> expansion code.
  torch::Tensor encode_flanks(const torch::Tensor& flanks);

  std::vector<torch::Tensor> generator_parameters() const;
  std::vector<torch::Tensor> discriminator_parameters() const;

  ModelConfig cfg;
  TemplateEncoder e1{nullptr};
  TemplateDecoder g1{nullptr};
  ManeuverEncoder e2{nullptr};
  ManeuverGenerator g2{nullptr};
  FlankGenerator g3{nullptr};
  FlankEncoder e3{nullptr};
  ManeuverDiscriminator d2{nullptr};
  ExpansionDiscriminator d3{nullptr};
};
TORCH_MODULE(Model);

/// Builds a model with parameters initialized from `seed`.
Model make_model(const ModelConfig& cfg, std::uint64_t seed);

/// Concatenates (F1, X12, F2) along time and returns the length-M window
/// starting at p, 0 <= p <= M-N. X12 appears intact at offset (M-N)-p.
torch::Tensor assemble_and_crop(const torch::Tensor& f1, const torch::Tensor& x12,
                                const torch::Tensor& f2, std::int64_t p);

// -- loss terms (one per training objective) ---------------------------------

/// mean((score - 1)^2) over the translated batch's discriminator scores.
torch::Tensor lsgan_gen_translation(const torch::Tensor& d2_fake);
/// mean((real - 1)^2) + mean(fake^2).
torch::Tensor lsgan_dis_translation(const torch::Tensor& d2_real,
                                    const torch::Tensor& d2_fake);
/// Mean absolute error between channel l of the translation and of the
/// paired real maneuver, with a per-sample channel index l.
torch::Tensor pairing_loss(const torch::Tensor& x12, const torch::Tensor& x2,
                           const torch::Tensor& signal_index);
/// Mean absolute error between the recovered and the input template.
torch::Tensor cycle_loss(const torch::Tensor& x121, const torch::Tensor& x1);
torch::Tensor lsgan_gen_expansion(const torch::Tensor& d3_fake);
torch::Tensor lsgan_dis_expansion(const torch::Tensor& d3_real,
                                  const torch::Tensor& d3_fake);
/// Mean absolute error between a domain sample and its autoencoder image.
torch::Tensor identity_recon(const torch::Tensor& x, const torch::Tensor& x_rec);
/// Mean absolute error over the concatenated (content, style) code pair.
torch::Tensor code_recon_translation(const torch::Tensor& c1, const torch::Tensor& c2,
                                     const torch::Tensor& c1_hat,
                                     const torch::Tensor& c2_hat);
/// Mean absolute error between the drawn and the recovered expansion code.
torch::Tensor code_recon_expansion(const torch::Tensor& c3, const torch::Tensor& c3_hat);

struct GenTerms {
  torch::Tensor gen_tran, gen_exp, pair, cyc, id1, id2, cr2, cr3;
};
struct DisTerms {
  torch::Tensor dis_tran, dis_exp;
};

/// w.gen*(gen_tran + gen_exp) + w.pair*pair + w.cyc*cyc
/// + w.id*(id1 + id2) + w.cr*(cr2 + cr3).
torch::Tensor generator_objective(const GenTerms& t, const LossWeights& w);
/// dis_tran + dis_exp (the discriminator group carries no weights).
torch::Tensor discriminator_objective(const DisTerms& t);

// -- checkpointing ------------------------------------------------------------

/// Single-file checkpoint: magic "SILC", version, a JSON manifest (config +
/// ordered tensor names/shapes) and raw little-endian float32 payloads.
/// Round-trips bit-exactly.
void save_checkpoint(const Model& model, const std::string& path);
Model load_checkpoint(const std::string& path);

}  // namespace silgan::model
