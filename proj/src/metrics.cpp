#include <clickseg/metrics.hpp>

#include <cmath>

namespace clickseg {

ConfusionMatrix::ConfusionMatrix(double tp, double tn, double fp, double fn)
    : tp_(tp), tn_(tn), fp_(fp), fn_(fn), total_(tp + tn + fp + fn) {}

ConfusionMatrix ConfusionMatrix::from_counts(std::uint64_t tp,
                                             std::uint64_t tn,
                                             std::uint64_t fp,
                                             std::uint64_t fn) {
  if (tp + tn + fp + fn == 0)
    throw Error(ErrorCode::EmptyInput, "confusion matrix over zero pixels");
  return ConfusionMatrix(static_cast<double>(tp), static_cast<double>(tn),
                         static_cast<double>(fp), static_cast<double>(fn));
}

ConfusionMatrix ConfusionMatrix::from_fractions(double tp, double tn,
                                                double fp, double fn) {
  for (double v : {tp, tn, fp, fn})
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::UsageError,
                  "confusion fractions must be finite and non-negative");
  if (std::abs(tp + tn + fp + fn - 1.0) > 1e-12)
    throw Error(ErrorCode::UsageError,
                "confusion fractions must sum to 1, got " +
                    std::to_string(tp + tn + fp + fn));
  return ConfusionMatrix(tp, tn, fp, fn);
}

ConfusionMatrix ConfusionMatrix::transposed() const {
  return ConfusionMatrix(tp_, tn_, fn_, fp_);
}

PixelCounts& PixelCounts::operator+=(const PixelCounts& other) noexcept {
  tp += other.tp;
  tn += other.tn;
  fp += other.fp;
  fn += other.fn;
  return *this;
}

ConfusionMatrix PixelCounts::matrix() const {
  return ConfusionMatrix::from_counts(tp, tn, fp, fn);
}

PixelCounts count_pixels(const BinaryMask& pred, const BinaryMask& truth) {
  if (!pred.same_shape(truth))
    throw Error(ErrorCode::DimensionMismatch,
                "prediction is " + std::to_string(pred.width()) + "x" +
                    std::to_string(pred.height()) + " but truth is " +
                    std::to_string(truth.width()) + "x" +
                    std::to_string(truth.height()));
  PixelCounts counts;
  auto p = pred.data();
  auto t = truth.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i])
      ++(t[i] ? counts.tp : counts.fp);
    else
      ++(t[i] ? counts.fn : counts.tn);
  }
  return counts;
}

ConfusionMatrix confusion(const BinaryMask& pred, const BinaryMask& truth) {
  return count_pixels(pred, truth).matrix();
}

double accuracy(const ConfusionMatrix& cm) {
  return (cm.tp_weight() + cm.tn_weight()) / cm.total_weight();
}

double jaccard(const ConfusionMatrix& cm) {
  const double denom = cm.tp_weight() + cm.fp_weight() + cm.fn_weight();
  if (denom == 0.0)
    throw Error(ErrorCode::UndefinedMetric,
                "Jaccard index undefined: both masks are entirely background");
  return cm.tp_weight() / denom;
}

ErrorRates rates(const ConfusionMatrix& cm) {
  const double positives = cm.fn_weight() + cm.tp_weight();
  const double negatives = cm.fp_weight() + cm.tn_weight();
  if (positives == 0.0)
    throw Error(ErrorCode::UndefinedMetric,
                "FNR undefined: truth has no foreground pixels");
  if (negatives == 0.0)
    throw Error(ErrorCode::UndefinedMetric,
                "FPR undefined: truth has no background pixels");
  return {cm.fn_weight() / positives, cm.fp_weight() / negatives};
}

double auroc_from_rates(double fnr, double fpr) {
  if (!(fnr >= 0.0 && fnr <= 1.0 && fpr >= 0.0 && fpr <= 1.0))
    throw Error(ErrorCode::UsageError,
                "error rates must lie in [0, 1], got fnr=" +
                    std::to_string(fnr) + " fpr=" + std::to_string(fpr));
  return 1.0 - (fpr + fnr) / 2.0;
}

double auroc(const ConfusionMatrix& cm) {
  const auto r = rates(cm);
  return auroc_from_rates(r.fnr, r.fpr);
}

double observed_agreement(const ConfusionMatrix& cm) {
  return cm.tp() + cm.tn();
}

double chance_agreement(const ConfusionMatrix& cm) {
  return (cm.tn() + cm.fn()) * (cm.tn() + cm.fp()) +
         (cm.fp() + cm.tp()) * (cm.fn() + cm.tp());
}

double kappa(const ConfusionMatrix& cm) {
  // (fa - fc) / (N - fc) with both sides multiplied by N and simplified:
  //   N * fa - fc' = 2 (tp tn - fp fn)
  //   N^2 - fc'    = (tp + fp)(fp + tn) + (tp + fn)(fn + tn)
  // where fc' = N * fc. This avoids cancellation when fa is close to fc.
  const double tp = cm.tp_weight(), tn = cm.tn_weight();
  const double fp = cm.fp_weight(), fn = cm.fn_weight();
  const double denom = (tp + fp) * (fp + tn) + (tp + fn) * (fn + tn);
  if (denom == 0.0)
    throw Error(ErrorCode::UndefinedMetric,
                "kappa undefined: chance agreement is total");
  return 2.0 * (tp * tn - fp * fn) / denom;
}

// ---------------------------------------------------------------------------
// Agreement scales

namespace {

const AgreementScale kTraditionalAuroc{
    ScaleId::TraditionalAUROC,
    "traditional-auroc",
    0.50,
    1.0,
    {{0.50, "no agreement (F)"},
     {0.60, "poor agreement (D)"},
     {0.70, "fair agreement (C)"},
     {0.80, "good agreement (B)"},
     {0.90, "excellent agreement (A)"}},
    std::nullopt};

const AgreementScale kLandisKoch{ScaleId::LandisKoch,
                                 "landis-koch",
                                 -1.0,
                                 1.0,
                                 {{-1.0, "no agreement"},
                                  {0.0, "slight agreement"},
                                  {0.21, "fair agreement"},
                                  {0.41, "moderate agreement"},
                                  {0.61, "substantial agreement"},
                                  {0.81, "almost perfect agreement"}},
                                 std::nullopt};

const AgreementScale kFleiss{ScaleId::Fleiss,
                             "fleiss",
                             -1.0,
                             1.0,
                             {{-1.0, "poor agreement"},
                              {0.40, "fair to good agreement"},
                              {0.75, "excellent agreement"}},
                             1};

}  // namespace

const AgreementScale& scale(ScaleId id) {
  switch (id) {
    case ScaleId::TraditionalAUROC: return kTraditionalAuroc;
    case ScaleId::LandisKoch: return kLandisKoch;
    case ScaleId::Fleiss: return kFleiss;
  }
  throw Error(ErrorCode::UsageError, "unknown scale");
}

std::string_view to_string(ScaleId id) { return scale(id).name; }

std::string grade(double value, const AgreementScale& s) {
  if (!(value >= s.domain_min && value <= s.domain_max))
    throw Error(ErrorCode::OutOfScaleDomain,
                std::to_string(value) + " is outside the " + s.name +
                    " scale [" + std::to_string(s.domain_min) + ", " +
                    std::to_string(s.domain_max) + "]");
  std::size_t band = 0;
  for (std::size_t i = 1; i < s.bands.size(); ++i)
    if (value >= s.bands[i].lower)
      band = i;
  if (s.upper_closed_band && band == *s.upper_closed_band + 1 &&
      value == s.bands[band].lower)
    band = *s.upper_closed_band;
  return s.bands[band].label;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

template <typename F>
auto defined(F&& f) -> std::optional<decltype(f())> {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UndefinedMetric)
      return std::nullopt;
    throw;
  }
}

}  // namespace

EvalReport report_for(const ConfusionMatrix& cm) {
  EvalReport r{cm, accuracy(cm), defined([&] { return jaccard(cm); }),
               defined([&] { return auroc(cm); }),
               defined([&] { return kappa(cm); }), std::nullopt,
               std::nullopt, std::nullopt, std::nullopt, std::nullopt};
  if (auto er = defined([&] { return rates(cm); })) {
    r.fnr = er->fnr;
    r.fpr = er->fpr;
  }
  if (r.auroc)
    r.auroc_grade = *r.auroc < scale(ScaleId::TraditionalAUROC).domain_min
                        ? std::string(kBelowScale)
                        : grade(*r.auroc, ScaleId::TraditionalAUROC);
  if (r.kap) {
    r.kap_landis = grade(*r.kap, ScaleId::LandisKoch);
    r.kap_fleiss = grade(*r.kap, ScaleId::Fleiss);
  }
  return r;
}

EvalReport evaluate(const BinaryMask& pred, const BinaryMask& truth) {
  return report_for(confusion(pred, truth));
}

SetReport evaluate_set(
    const std::vector<std::pair<BinaryMask, BinaryMask>>& pairs) {
  if (pairs.empty())
    throw Error(ErrorCode::EmptyInput, "evaluation set is empty");
  PixelCounts pooled;
  SetReport out{report_for(ConfusionMatrix::from_counts(1, 0, 0, 0)), {}};
  out.per_image.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    PixelCounts counts;
    try {
      counts = count_pixels(pairs[i].first, pairs[i].second);
    } catch (const Error& e) {
      throw Error(e.code(), "pair " + std::to_string(i) + ": " + e.what());
    }
    pooled += counts;
    out.per_image.push_back(report_for(counts.matrix()));
  }
  out.micro = report_for(pooled.matrix());
  return out;
}

}  // namespace clickseg
