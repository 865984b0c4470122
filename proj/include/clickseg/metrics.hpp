#pragma once

#include <clickseg/raster.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace clickseg {

/// Pixel-wise binary confusion matrix.
///
/// Entries are kept as non-negative weights together with their total:
/// integer pixel counts when built from masks, or fractions summing to one
/// when built from rates. Accessors return fractions of the total, and every
/// metric is computed from the raw weights so integer inputs are not rounded
/// before the final division.
class ConfusionMatrix {
 public:
  static ConfusionMatrix from_counts(std::uint64_t tp, std::uint64_t tn,
                                     std::uint64_t fp, std::uint64_t fn);

  /// Fractions must be non-negative and sum to 1 within 1e-12.
  static ConfusionMatrix from_fractions(double tp, double tn, double fp,
                                        double fn);

  double tp() const noexcept { return tp_ / total_; }
  double tn() const noexcept { return tn_ / total_; }
  double fp() const noexcept { return fp_ / total_; }
  double fn() const noexcept { return fn_ / total_; }

  double tp_weight() const noexcept { return tp_; }
  double tn_weight() const noexcept { return tn_; }
  double fp_weight() const noexcept { return fp_; }
  double fn_weight() const noexcept { return fn_; }
  double total_weight() const noexcept { return total_; }

  /// Prediction and truth roles exchanged (fp <-> fn).
  ConfusionMatrix transposed() const;

 private:
  ConfusionMatrix(double tp, double tn, double fp, double fn);

  double tp_, tn_, fp_, fn_, total_;
};

/// Integer pixel tallies; the pooled form used for micro aggregation.
struct PixelCounts {
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;

  std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
  PixelCounts& operator+=(const PixelCounts& other) noexcept;
  ConfusionMatrix matrix() const;
};

PixelCounts count_pixels(const BinaryMask& pred, const BinaryMask& truth);
ConfusionMatrix confusion(const BinaryMask& pred, const BinaryMask& truth);

double accuracy(const ConfusionMatrix& cm);
double jaccard(const ConfusionMatrix& cm);

/// 1 - (FPR + FNR) / 2 at the single operating point described by `cm`.
/// This is balanced accuracy under another name.
double auroc(const ConfusionMatrix& cm);
double auroc_from_rates(double fnr, double fpr);

/// Observed agreement tp + tn.
double observed_agreement(const ConfusionMatrix& cm);
/// Chance agreement from the prediction and truth marginals.
double chance_agreement(const ConfusionMatrix& cm);
/// Cohen's kappa, (fa - fc) / (1 - fc).
double kappa(const ConfusionMatrix& cm);

struct ErrorRates {
  double fnr = 0.0;
  double fpr = 0.0;
};
ErrorRates rates(const ConfusionMatrix& cm);

// ---------------------------------------------------------------------------
// Agreement scales

enum class ScaleId { TraditionalAUROC, LandisKoch, Fleiss };

struct ScaleBand {
  double lower;
  std::string label;
};

/// Ordered bands over [domain_min, domain_max]. Band i covers
/// [bands[i].lower, bands[i + 1].lower), and the last band is closed at
/// domain_max. Bands with `upper_closed` set also admit their next
/// neighbour's lower bound.
struct AgreementScale {
  ScaleId id;
  std::string name;
  double domain_min;
  double domain_max;
  std::vector<ScaleBand> bands;
  // Index of a band whose printed upper bound is inclusive while the next
  // band's printed lower bound is exclusive ("0.40-0.75" then "> 0.75").
  std::optional<std::size_t> upper_closed_band;
};

const AgreementScale& scale(ScaleId id);
std::string_view to_string(ScaleId id);

/// Label of the band containing `value`; OutOfScaleDomain outside the scale.
std::string grade(double value, const AgreementScale& scale);
inline std::string grade(double value, ScaleId id) {
  return grade(value, scale(id));
}

inline constexpr std::string_view kBelowScale = "below scale";

// ---------------------------------------------------------------------------
// Reports

struct EvalReport {
  ConfusionMatrix cm;
  double acc;
  std::optional<double> jac;
  std::optional<double> auroc;
  std::optional<double> kap;
  std::optional<double> fnr;
  std::optional<double> fpr;
  std::optional<std::string> auroc_grade;
  std::optional<std::string> kap_landis;
  std::optional<std::string> kap_fleiss;
};

/// Every metric and grade for one matrix; undefined metrics stay empty.
EvalReport report_for(const ConfusionMatrix& cm);

EvalReport evaluate(const BinaryMask& pred, const BinaryMask& truth);

struct SetReport {
  EvalReport micro;
  std::vector<EvalReport> per_image;
};

/// Per-image reports plus a micro report over pixel counts pooled across
/// every pair.
SetReport evaluate_set(
    const std::vector<std::pair<BinaryMask, BinaryMask>>& pairs);

}  // namespace clickseg
