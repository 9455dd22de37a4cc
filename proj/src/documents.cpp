#include "papr/documents.hpp"

#include "papr/version.hpp"

namespace papr {

nlohmann::json impairment_to_json(const ImpairmentSpec& spec) {
  nlohmann::json j;
  if (std::holds_alternative<NoImpairment>(spec)) {
    j["kind"] = "none";
  } else if (const auto* imb = std::get_if<ImbalanceParams>(&spec)) {
    j["kind"] = "imbalance";
    j["delta_g"] = imb->delta_g;
    j["delta_phi_deg"] = imb->delta_phi_deg;
  } else if (const auto* qp = std::get_if<QuantizerParams>(&spec)) {
    j["kind"] = "quantize";
    j["bits"] = qp->bits;
    j["reference_level"] = qp->reference_level;
  } else if (const auto* lp = std::get_if<LowpassParams>(&spec)) {
    j["kind"] = "lowpass";
    j["cutoff"] = lp->cutoff;
    j["order"] = lp->order;
  }
  return j;
}

nlohmann::json make_provenance(nlohmann::json config) {
  nlohmann::json p;
  p["tool"] = kToolName;
  p["version"] = kToolVersion;
  p["config"] = std::move(config);
  return p;
}

ResultDocument make_monte_carlo_document(const MonteCarloResult& result,
                                         nlohmann::json provenance) {
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& e : result.entries) {
    nlohmann::json row;
    row["n"] = e.n;
    row["trials"] = result.config.trials;
    row["mean_papr_db"] = e.mean_papr_db;
    row["ci_low_db"] = e.ci_low_db;
    row["ci_high_db"] = e.ci_high_db;
    row["mean_db_avg"] = e.mean_db_avg;
    row["ci_db_low"] = e.ci_db_low;
    row["ci_db_high"] = e.ci_db_high;
    row["sd_db"] = e.sd_db;
    row["theory_papr_db"] = e.theory_papr_db;
    row["trial_paprs_db"] = e.trial_paprs_db;
    curve.push_back(std::move(row));
  }

  ResultDocument doc;
  doc.kind = ResultKind::monte_carlo;
  doc.payload["sigma"] = result.config.sigma;
  doc.payload["master_seed"] = result.config.master_seed;
  doc.payload["confidence_level"] = result.config.confidence_level;
  doc.payload["impairment"] = impairment_to_json(result.config.impairment);
  doc.payload["curve"] = std::move(curve);
  doc.provenance = std::move(provenance);
  return doc;
}

ResultDocument make_kde_document(const KdeCurve& curve, std::uint64_t n,
                                 nlohmann::json provenance) {
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t k = 0; k < curve.grid.size(); ++k) {
    nlohmann::json row;
    row["papr_db"] = curve.grid[k];
    row["density"] = curve.density[k];
    points.push_back(std::move(row));
  }

  ResultDocument doc;
  doc.kind = ResultKind::kde;
  doc.payload["n"] = n;
  doc.payload["bandwidth_db"] = curve.bandwidth;
  doc.payload["points"] = std::move(points);
  doc.provenance = std::move(provenance);
  return doc;
}

ResultDocument make_spectrogram_document(const Spectrogram& s,
                                         nlohmann::json provenance) {
  nlohmann::json power = nlohmann::json::array();
  for (std::size_t f = 0; f < s.freq_bins; ++f) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t t = 0; t < s.time_bins; ++t) row.push_back(s.at(f, t));
    power.push_back(std::move(row));
  }

  ResultDocument doc;
  doc.kind = ResultKind::spectrogram;
  doc.payload["freq_bins"] = s.freq_bins;
  doc.payload["time_bins"] = s.time_bins;
  doc.payload["freq_axis_hz"] = s.freq_axis_hz;
  doc.payload["time_axis_s"] = s.time_axis_s;
  doc.payload["power"] = std::move(power);
  doc.provenance = std::move(provenance);
  return doc;
}

ResultDocument make_band_report_document(const BandReport& report,
                                         nlohmann::json provenance) {
  nlohmann::json bins = nlohmann::json::array();
  for (std::size_t k = 0; k < report.bin_freq_hz.size(); ++k) {
    nlohmann::json row;
    row["freq_hz"] = report.bin_freq_hz[k];
    row["papr_db"] = report.bin_papr_db[k];
    bins.push_back(std::move(row));
  }

  ResultDocument doc;
  doc.kind = ResultKind::band_report;
  doc.payload["f_low_hz"] = report.f_low_hz;
  doc.payload["f_high_hz"] = report.f_high_hz;
  doc.payload["num_bins"] = report.bin_freq_hz.size();
  doc.payload["time_bins"] = report.time_bins;
  doc.payload["band_mean_papr_db"] = report.band_mean_papr_db;
  doc.payload["band_ci_db"] = {report.ci_low_db, report.ci_high_db};
  doc.payload["band_mean_db_avg"] = report.band_mean_db_avg;
  doc.payload["theory_papr_db"] = report.theory_papr_db;
  doc.payload["excess_db"] = report.excess_db;
  doc.payload["z_score"] = report.z_score;
  doc.payload["verdict"] = report.verdict == BandVerdict::consistent_with_wgn
                               ? "consistent_with_wgn"
                               : "inconsistent";
  doc.payload["bins"] = std::move(bins);
  doc.provenance = std::move(provenance);
  return doc;
}

ResultDocument make_stats_table_document(nlohmann::json columns,
                                         nlohmann::json rows,
                                         nlohmann::json provenance) {
  ResultDocument doc;
  doc.kind = ResultKind::stats_table;
  doc.payload["columns"] = std::move(columns);
  doc.payload["rows"] = std::move(rows);
  doc.provenance = std::move(provenance);
  return doc;
}

}  // namespace papr
