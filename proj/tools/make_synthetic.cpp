// Writes the planted three-theme feedback corpus, its embeddings and a config
// that runs all three models on it:
//   fbtopics_synth --out examples_run --seed 7
//   fbtopics --config examples_run/config.json run
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fbtopics/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic feedback corpus with planted themes"};
  fs::path out = "synthetic";
  std::uint64_t seed = 1;
  std::size_t per_theme = 100;
  std::size_t dim = 16;
  app.add_option("--out", out, "Directory to write into");
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--docs-per-theme", per_theme, "Comments per theme")->check(CLI::PositiveNumber);
  app.add_option("--dim", dim, "Embedding dimension")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    const auto fx = fbtopics::synthetic::planted_feedback(per_theme, seed, dim);
    fs::create_directories(out);
    {
      std::ofstream corpus(out / "corpus.jsonl", std::ios::binary);
      for (std::size_t i = 0; i < fx.corpus.size(); ++i) {
        const auto& d = fx.corpus[i];
        corpus << json{{"id", d.id}, {"text", d.raw_text}, {"theme", fx.labels[i]}}.dump() << '\n';
      }
    }
    fbtopics::save_embeddings(fx.embeddings, out / "embeddings.txt");
    const json config{{"corpus", {{"path", "corpus.jsonl"}}},
                      {"models", {"lda", "gsdmm", "kbert"}},
                      {"kbert", {{"embeddings", "embeddings.txt"}}},
                      {"topic_counts", {3, 5}},
                      {"seed", seed},
                      {"output_dir", "out"}};
    std::ofstream(out / "config.json", std::ios::binary) << config.dump(2) << '\n';
    std::printf("wrote %zu comments to %s\n", fx.corpus.size(), out.string().c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
