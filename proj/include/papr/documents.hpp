#pragma once

#include <cstdint>

#include "papr/estimator.hpp"
#include "papr/iq_io.hpp"
#include "papr/spectro.hpp"

namespace papr {

/// JSON echo of an impairment selection, used inside provenance blocks.
nlohmann::json impairment_to_json(const ImpairmentSpec& spec);

/// Standard provenance block: tool name/version plus the caller's config.
nlohmann::json make_provenance(nlohmann::json config);

ResultDocument make_monte_carlo_document(const MonteCarloResult& result,
                                         nlohmann::json provenance);

ResultDocument make_kde_document(const KdeCurve& curve, std::uint64_t n,
                                 nlohmann::json provenance);

ResultDocument make_spectrogram_document(const Spectrogram& s,
                                         nlohmann::json provenance);

ResultDocument make_band_report_document(const BandReport& report,
                                         nlohmann::json provenance);

ResultDocument make_stats_table_document(nlohmann::json columns,
                                         nlohmann::json rows,
                                         nlohmann::json provenance);

}  // namespace papr
