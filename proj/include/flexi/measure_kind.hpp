#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace flexi {

enum class Measure { wracc, zscore, kl, hd, qr };

// Support weighting f(s) of the quadratic measure.
enum class QrWeight { linear, entropy };

/// A quality measure; the qr weighting is present exactly when the measure is qr.
class MeasureKind {
 public:
  explicit MeasureKind(Measure measure, std::optional<QrWeight> weight = std::nullopt);

  static MeasureKind wracc() { return MeasureKind(Measure::wracc); }
  static MeasureKind zscore() { return MeasureKind(Measure::zscore); }
  static MeasureKind kl() { return MeasureKind(Measure::kl); }
  static MeasureKind hd() { return MeasureKind(Measure::hd); }
  static MeasureKind qr(QrWeight weight = QrWeight::linear) { return MeasureKind(Measure::qr, weight); }

  static MeasureKind parse(std::string_view measure, std::string_view weight = "linear");

  [[nodiscard]] Measure measure() const noexcept { return measure_; }
  [[nodiscard]] std::optional<QrWeight> weight() const noexcept { return weight_; }
  [[nodiscard]] QrWeight qr_weight() const;
  [[nodiscard]] std::string name() const;

  friend bool operator==(const MeasureKind&, const MeasureKind&) = default;

 private:
  Measure measure_;
  std::optional<QrWeight> weight_;
};

}  // namespace flexi
