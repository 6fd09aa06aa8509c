#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "eegdn/cli/app.hpp"
#include "eegdn/report/metrics_report.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using eegdn::data::read_bytes;
using eegdn::data::read_text;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "eegdn");
  std::ostringstream out, err;
  const int code = eegdn::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Run synth(const fs::path& dir, std::uint64_t seed = 1) {
  return cli({"synth-data", "--n-eeg", "16", "--n-emg", "20", "--length", "64", "--seed", std::to_string(seed), "--out",
              dir.string()});
}

std::vector<std::string> small_train(const fs::path& data, const fs::path& out) {
  return {"train", "--data", data.string(), "--out", out.string(), "--width-scale", "0.0625", "--epochs", "2",
          "--batch-size", "8", "--remix", "2", "--lr", "1e-3", "--seed", "5"};
}

// fcnn with no hidden layers and an identity head: denoise(y) == y.
fs::path identity_checkpoint(const fs::path& dir, std::size_t len) {
  auto g = eegdn::zoo::build_fcnn_baseline(len, 0, 0);
  for (std::size_t i = 0; i < len; ++i) g.net.params()[0].weights[i * len + i] = 1.0;
  const auto path = dir / "identity.ednc";
  eegdn::zoo::save_checkpoint(g, {}, path);
  return path;
}

}  // namespace

TEST(Cli, SynthDataWritesCorpusDeterministically) {
  const auto dir = eegdn::testing::temp_dir("cli_synth");
  const auto r = synth(dir / "a");
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"eeg.ednb", "emg.ednb", "manifest.txt"}) EXPECT_TRUE(fs::exists(dir / "a" / f)) << f;
  const auto m = eegdn::KeyValues::parse(read_text(dir / "a" / "manifest.txt"));
  EXPECT_EQ(m.get("kind").value_or(""), "corpus");
  EXPECT_EQ(m.require_uint("n_eeg"), 16u);

  ASSERT_EQ(synth(dir / "b").code, 0);
  for (const char* f : {"eeg.ednb", "emg.ednb", "manifest.txt"}) {
    EXPECT_EQ(read_bytes(dir / "a" / f), read_bytes(dir / "b" / f)) << f;
  }
}

TEST(Cli, UsageErrorsExitOne) {
  const auto dir = eegdn::testing::temp_dir("cli_usage");
  EXPECT_EQ(cli({"synth-data", "--n-eeg", "0", "--n-emg", "3", "--out", dir.string()}).code, 1);
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"synth-data", "--n-eeg", "2"}).code, 1);
  EXPECT_EQ(cli({"gradcheck", "--tolerance", "abc"}).code, 1);
  EXPECT_EQ(cli({"gradcheck", "--config", (dir / "missing.cfg").string()}).code, 1);
  const auto help = cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("synth-data"), std::string::npos);
}

TEST(Cli, TrainEvaluateDenoise) {
  const auto dir = eegdn::testing::temp_dir("cli_train");
  ASSERT_EQ(synth(dir / "corpus").code, 0);
  const auto r = cli(small_train(dir / "corpus", dir / "run"));
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"model.ednc", "loss.csv", "loss.csv.meta", "testset/noisy.ednb", "testset/manifest.txt"}) {
    EXPECT_TRUE(fs::exists(dir / "run" / f)) << f;
  }
  const auto loss = read_text(dir / "run" / "loss.csv");
  EXPECT_EQ(loss.rfind("epoch,train_loss,val_loss\n", 0), 0u);
  EXPECT_EQ(std::count(loss.begin(), loss.end(), '\n'), 3);

  // Identical seed and config give byte-identical artifacts.
  ASSERT_EQ(cli(small_train(dir / "corpus", dir / "run2")).code, 0);
  EXPECT_EQ(read_bytes(dir / "run" / "model.ednc"), read_bytes(dir / "run2" / "model.ednc"));
  EXPECT_EQ(read_bytes(dir / "run" / "loss.csv"), read_bytes(dir / "run2" / "loss.csv"));

  const auto ev = cli({"evaluate", "--checkpoint", (dir / "run" / "model.ednc").string(), "--testset",
                       (dir / "run" / "testset").string(), "--out", (dir / "report.csv").string()});
  ASSERT_EQ(ev.code, 0) << ev.err;
  const auto report = read_text(dir / "report.csv");
  EXPECT_NE(report.find("model,-7,"), std::string::npos);
  EXPECT_NE(report.find("noisy,all,"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "report.csv.meta"));

  const auto dn = cli({"denoise", "--checkpoint", (dir / "run" / "model.ednc").string(), "--in",
                       (dir / "corpus" / "eeg.ednb").string(), "--out", (dir / "clean.csv").string()});
  ASSERT_EQ(dn.code, 0) << dn.err;
  const auto cleaned = eegdn::data::load_matrix(dir / "clean.csv");
  EXPECT_EQ(cleaned.rows(), 16u);
  EXPECT_EQ(cleaned.cols(), 64u);
}

TEST(Cli, DenoiseRejectsConstantRowsAndBadFiles) {
  const auto dir = eegdn::testing::temp_dir("cli_denoise");
  const auto ck = identity_checkpoint(dir, 8);
  eegdn::data::write_text(dir / "in.csv", "1,2,3,4,5,6,7,8\n2,2,2,2,2,2,2,2\n");
  const auto r = cli({"denoise", "--checkpoint", ck.string(), "--in", (dir / "in.csv").string(), "--out",
                      (dir / "out.csv").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("row 1"), std::string::npos) << r.err;

  eegdn::data::write_text(dir / "wide.csv", "1,2,3\n");
  EXPECT_EQ(cli({"denoise", "--checkpoint", ck.string(), "--in", (dir / "wide.csv").string(), "--out",
                 (dir / "o.csv").string()})
                .code,
            2);
  eegdn::data::write_text(dir / "junk.ednc", "not a checkpoint");
  EXPECT_EQ(cli({"denoise", "--checkpoint", (dir / "junk.ednc").string(), "--in", (dir / "in.csv").string(), "--out",
                 (dir / "o.csv").string()})
                .code,
            2);
}

TEST(Cli, IdentityModelMatchesNoisyBaseline) {
  const auto dir = eegdn::testing::temp_dir("cli_identity");
  ASSERT_EQ(synth(dir / "corpus").code, 0);
  ASSERT_EQ(cli(small_train(dir / "corpus", dir / "run")).code, 0);
  const auto ck = identity_checkpoint(dir, 64);
  ASSERT_EQ(cli({"evaluate", "--checkpoint", ck.string(), "--testset", (dir / "run" / "testset").string(), "--out",
                 (dir / "r.csv").string()})
                .code,
            0);

  const auto set = eegdn::data::load_eval_bundle(dir / "run" / "testset");
  const auto rep = eegdn::report::evaluate(set, [&](std::size_t i, std::span<const double>) {
    const auto row = set.clean.row(i);
    return eegdn::signal::Samples(row.begin(), row.end());
  });
  EXPECT_NEAR(rep.overall_model.rrmse_t.mean, 0.0, 1e-12);
  EXPECT_NEAR(rep.overall_model.rrmse_f.mean, 0.0, 1e-12);
  EXPECT_NEAR(rep.overall_model.cc.mean, 1.0, 1e-12);

  const auto csv = read_text(dir / "r.csv");
  std::istringstream lines(csv);
  std::string line;
  std::vector<std::string> model_rows, noisy_rows;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    if (line.compare(0, comma, "model") == 0) model_rows.push_back(line.substr(comma));
    if (line.compare(0, comma, "noisy") == 0) noisy_rows.push_back(line.substr(comma));
  }
  ASSERT_EQ(model_rows.size(), 11u);
  ASSERT_EQ(noisy_rows.size(), 11u);
  // Identical up to the round-off of dividing by and multiplying back sigma_y.
  for (std::size_t i = 0; i < model_rows.size(); ++i) {
    const auto a = eegdn::data::parse_csv(model_rows[i].substr(model_rows[i].find(',', 1) + 1));
    const auto b = eegdn::data::parse_csv(noisy_rows[i].substr(noisy_rows[i].find(',', 1) + 1));
    ASSERT_EQ(a.cols(), b.cols());
    for (std::size_t c = 0; c < a.cols(); ++c) EXPECT_NEAR(a.row(0)[c], b.row(0)[c], 1e-12) << model_rows[i];
  }
}

TEST(Cli, GradcheckPassesAndNegativeControlsFail) {
  EXPECT_EQ(cli({"gradcheck", "--seeds", "2", "--max-coords", "12"}).code, 0);
  EXPECT_EQ(cli({"gradcheck", "--seeds", "1", "--max-coords", "12", "--tolerance", "1e-12"}).code, 3);
  const auto bad = cli({"gradcheck", "--seeds", "1", "--max-coords", "12", "--corrupt-backward"});
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.out.find("FAIL"), std::string::npos);
}

TEST(Cli, ConfigFilePrecedence) {
  const auto dir = eegdn::testing::temp_dir("cli_config");
  ASSERT_EQ(synth(dir / "corpus").code, 0);
  eegdn::data::write_text(dir / "run.cfg",
                          "# desk run\nepochs = 1\nbatch_size=8\nremix=1\nwidth_scale=0.0625\nlr=1e-3\nseed=5\n");

  ASSERT_EQ(cli({"train", "--config", (dir / "run.cfg").string(), "--data", (dir / "corpus").string(), "--out",
                 (dir / "a").string()})
                .code,
            0);
  auto meta = eegdn::KeyValues::parse(read_text(dir / "a" / "loss.csv.meta"));
  EXPECT_EQ(meta.require("epochs"), "1");
  EXPECT_EQ(meta.require("batch_size"), "8");
  EXPECT_EQ(meta.require("decay"), "0.9");

  ASSERT_EQ(cli({"train", "--data", (dir / "corpus").string(), "--out", (dir / "b").string(), "--epochs", "2",
                 "--config", (dir / "run.cfg").string()})
                .code,
            0);
  meta = eegdn::KeyValues::parse(read_text(dir / "b" / "loss.csv.meta"));
  EXPECT_EQ(meta.require("epochs"), "2");
  EXPECT_EQ(meta.require("remix"), "1");

  eegdn::data::write_text(dir / "bad.cfg", "epochs\n");
  EXPECT_EQ(cli({"train", "--config", (dir / "bad.cfg").string(), "--data", (dir / "corpus").string(), "--out",
                 (dir / "c").string()})
                .code,
            1);
  eegdn::data::write_text(dir / "unknown.cfg", "colour=blue\n");
  EXPECT_EQ(cli({"train", "--config", (dir / "unknown.cfg").string(), "--data", (dir / "corpus").string(), "--out",
                 (dir / "c").string()})
                .code,
            1);
}

TEST(Cli, CorruptManifestIsAConfigError) {
  const auto dir = eegdn::testing::temp_dir("cli_manifest");
  ASSERT_EQ(synth(dir / "corpus").code, 0);
  auto text = read_text(dir / "corpus" / "manifest.txt");
  text += "length=128\n";
  eegdn::data::write_text(dir / "corpus" / "manifest.txt", text);
  const auto r = cli(small_train(dir / "corpus", dir / "run"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("length"), std::string::npos) << r.err;
}
