#include "flexi/measure_kind.hpp"

#include "flexi/error.hpp"

namespace flexi {

MeasureKind::MeasureKind(Measure measure, std::optional<QrWeight> weight)
    : measure_(measure), weight_(weight) {
  if ((measure == Measure::qr) != weight.has_value()) {
    throw Error(ErrorCode::invariant, "the f(s) weighting is given exactly for the qr measure");
  }
}

MeasureKind MeasureKind::parse(std::string_view measure, std::string_view weight) {
  if (measure == "wracc") return wracc();
  if (measure == "zscore" || measure == "z-score") return zscore();
  if (measure == "kl") return kl();
  if (measure == "hd") return hd();
  if (measure == "qr") {
    if (weight == "linear") return qr(QrWeight::linear);
    if (weight == "entropy") return qr(QrWeight::entropy);
    throw Error(ErrorCode::config, "unknown f variant '" + std::string(weight) + "' (linear|entropy)");
  }
  throw Error(ErrorCode::config, "unknown measure '" + std::string(measure) + "' (wracc|zscore|kl|hd|qr)");
}

QrWeight MeasureKind::qr_weight() const {
  if (!weight_) throw Error(ErrorCode::invariant, "measure " + name() + " has no f(s) weighting");
  return *weight_;
}

std::string MeasureKind::name() const {
  switch (measure_) {
    case Measure::wracc: return "wracc";
    case Measure::zscore: return "zscore";
    case Measure::kl: return "kl";
    case Measure::hd: return "hd";
    case Measure::qr: return *weight_ == QrWeight::linear ? "qr-linear" : "qr-entropy";
  }
  return "?";
}

}  // namespace flexi
