// End-to-end checks of the command-line tool: flags, exit codes, and the
// documents it writes. The binary path is injected by the build.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "papr/iq_io.hpp"
#include "papr/math.hpp"
#include "papr/spectro.hpp"
#include "synth.hpp"

namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "papr_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PAPR_CLI_PATH) + " " + args +
                          " >" + (work_dir() / "stdout.txt").string() +
                          " 2>" + (work_dir() / "stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("help and flag validation") {
  CHECK(run_cli("--help") == 0);
  const std::string help = slurp(work_dir() / "stdout.txt");
  for (const char* sub : {"stats", "sim", "spectro", "verify"})
    CHECK(help.find(sub) != std::string::npos);

  CHECK(run_cli("") != 0);                       // subcommand required
  CHECK(run_cli("stats --n 10 --bogus") != 0);   // unknown flag
  CHECK(run_cli("frobnicate") != 0);             // unknown subcommand
  CHECK(run_cli("stats") != 0);                  // needs --n or --n-range
  CHECK(run_cli("stats --n 0") != 0);
}

TEST_CASE("stats emits the closed-form table") {
  const auto out = work_dir() / "stats.json";

  SUBCASE("mean PAPR in dB for the spectrogram-sized block") {
    REQUIRE(run_cli("stats --n 3517 --out " + out.string()) == 0);
    const auto doc = papr::read_result(out);
    CHECK(doc.kind == papr::ResultKind::stats_table);
    const auto& row = doc.payload.at("rows").at(0);
    CHECK(row.at("n").get<std::uint64_t>() == 3517);
    CHECK(row.at("theory_papr_db").get<double>() ==
          doctest::Approx(9.42).epsilon(5e-4));
  }

  SUBCASE("n = 1 row has exact values and null large-n columns") {
    REQUIRE(run_cli("stats --n 1 --quantiles 0.5 --out " + out.string()) == 0);
    const auto doc = papr::read_result(out);
    const auto& row = doc.payload.at("rows").at(0);
    CHECK(row.at("mean_papr").get<double>() == 1.0);
    CHECK(row.at("mean_cf").get<double>() ==
          doctest::Approx(0.886227).epsilon(1e-5));
    CHECK(row.at("mean_papr_gumbel").is_null());
    CHECK(row.at("dunsmore_mean_papr").is_null());
    CHECK(row.at("papr_quantile_0.5").get<double>() ==
          doctest::Approx(std::log(2.0)));
  }

  SUBCASE("approximate-formula errors at n = 1000 are about -/+0.3 dB") {
    REQUIRE(run_cli("stats --n 1000 --rel-err --out " + out.string()) == 0);
    const auto doc = papr::read_result(out);
    const auto& row = doc.payload.at("rows").at(0);
    CHECK(row.at("err_dunsmore_db").get<double>() ==
          doctest::Approx(-0.3).epsilon(0.2));
    CHECK(row.at("err_keysight_db").get<double>() ==
          doctest::Approx(+0.3).epsilon(0.2));
  }

  SUBCASE("log-spaced range with csv output") {
    const auto csv = work_dir() / "stats.csv";
    REQUIRE(run_cli("stats --n-range 10:1000:3 --format csv --out " +
                    csv.string()) == 0);
    const std::string text = slurp(csv);
    CHECK(text.rfind("n,", 0) == 0);
    CHECK(text.find("\n10,") != std::string::npos);
    CHECK(text.find("\n100,") != std::string::npos);
    CHECK(text.find("\n1000,") != std::string::npos);
  }
}

TEST_CASE("sim runs a deterministic Monte Carlo") {
  const auto out1 = work_dir() / "sim1.json";
  const auto out2 = work_dir() / "sim2.json";
  const std::string flags = "sim --sizes 200 --trials 400 --seed 7 --out ";

  REQUIRE(run_cli(flags + out1.string()) == 0);
  REQUIRE(run_cli(flags + out2.string()) == 0);
  CHECK(slurp(out1) == slurp(out2));

  const auto doc = papr::read_result(out1);
  CHECK(doc.kind == papr::ResultKind::monte_carlo);
  const auto& row = doc.payload.at("curve").at(0);
  CHECK(row.at("n").get<std::uint64_t>() == 200);
  CHECK(row.at("trial_paprs_db").size() == 400);
  const double mean = row.at("mean_papr_db").get<double>();
  const double theory = row.at("theory_papr_db").get<double>();
  CHECK(std::abs(mean - theory) < 0.2);
  CHECK(doc.provenance.at("config").at("seed").get<std::uint64_t>() == 7);

  SUBCASE("kde companion document") {
    const auto out = work_dir() / "simk.json";
    REQUIRE(run_cli("sim --sizes 200 --trials 400 --seed 7 --kde --out " +
                    out.string()) == 0);
    const auto kde = papr::read_result(work_dir() / "simk_kde_n200.json");
    CHECK(kde.kind == papr::ResultKind::kde);
    CHECK(kde.payload.at("points").size() == 512);
  }

  SUBCASE("impairment flag parsing") {
    const auto out = work_dir() / "simi.json";
    CHECK(run_cli("sim --sizes 100 --trials 50 --seed 1 --impairment "
                  "imbalance:0.2,20 --out " + out.string()) == 0);
    CHECK(run_cli("sim --sizes 100 --trials 50 --seed 1 --impairment "
                  "lowpass:0.25,40 --out " + out.string()) == 0);
    CHECK(run_cli("sim --sizes 100 --trials 50 --seed 1 --impairment "
                  "quantize:12,8 --out " + out.string()) == 0);
    CHECK(run_cli("sim --sizes 100 --trials 50 --impairment garbage:1,2") != 0);
    CHECK(run_cli("sim --sizes 100 --trials 50 --impairment imbalance:0.2") !=
          0);
  }
}

TEST_CASE("spectro and verify on synthetic captures") {
  const auto dir = work_dir();
  const auto clean_path = dir / "clean.iq";
  const auto busy_path = dir / "busy.iq";

  auto clean = synth::wgn_capture(200000, 424242);
  papr::write_capture(clean, clean_path);

  auto busy = synth::wgn_capture(200000, 424243);
  std::vector<double> tones;
  for (int k = 50; k < 84; ++k) tones.push_back(k / 512.0);
  synth::add_bursty_multitone(busy, tones, 0.3, 512, 5, 99);
  papr::write_capture(busy, busy_path);

  SUBCASE("spectro writes the spectrogram and per-bin PAPR documents") {
    const auto spec_out = dir / "spec.json";
    const auto papr_out = dir / "papr.csv";
    REQUIRE(run_cli("spectro --in " + clean_path.string() + " --out " +
                    spec_out.string() + " --papr-out " + papr_out.string() +
                    " --format csv") == 0);
    const std::string text = slurp(papr_out);
    CHECK(text.rfind("freq_hz,papr_db\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 513);

    // Spectrogram document is json-only; --format csv applies to --papr-out.
    const std::string stdout_text = slurp(dir / "stdout.txt");
    CHECK(stdout_text.find("512 freq bins") != std::string::npos);
  }

  SUBCASE("spectro rejects captures shorter than one window") {
    const auto tiny_path = dir / "tiny.iq";
    papr::write_capture(synth::wgn_capture(100, 9), tiny_path);
    CHECK(run_cli("spectro --in " + tiny_path.string()) == 1);
  }

  SUBCASE("verify exit codes: 0 clean, 2 occupied, 1 usage") {
    const double lo = 3.7e9 + 50.0 / 512.0 * 30e6;
    const double hi = 3.7e9 + 83.0 / 512.0 * 30e6;
    const std::string band =
        std::to_string(lo) + ":" + std::to_string(hi);

    CHECK(run_cli("verify --in " + clean_path.string() + " --band " + band) ==
          0);

    const auto report_path = dir / "report.json";
    CHECK(run_cli("verify --in " + busy_path.string() + " --band " + band +
                  " --out " + report_path.string()) == 2);
    const auto report = papr::read_result(report_path);
    CHECK(report.kind == papr::ResultKind::band_report);
    CHECK(report.payload.at("verdict").get<std::string>() == "inconsistent");
    CHECK(report.payload.at("excess_db").get<double>() > 3.0);

    CHECK(run_cli("verify --in " + clean_path.string() +
                  " --band 3.9e9:3.95e9") == 1);  // beyond the capture span
    CHECK(run_cli("verify --in " + clean_path.string() + " --band 10:5") == 1);
    CHECK(run_cli("verify --in " + dir.string() + "/missing.iq --band " +
                  band) == 1);
  }

  SUBCASE("spectro output is deterministic") {
    const auto a = dir / "d1.json";
    const auto b = dir / "d2.json";
    REQUIRE(run_cli("spectro --in " + clean_path.string() + " --length 128 "
                    "--out " + a.string()) == 0);
    REQUIRE(run_cli("spectro --in " + clean_path.string() + " --length 128 "
                    "--out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
  }
}
