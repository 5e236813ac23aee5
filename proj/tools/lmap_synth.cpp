// Writes a synthetic preferential-attachment citation corpus as JSON lines.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "lmap/errors.hpp"
#include "lmap/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic citation corpus generator"};
  lmap::SyntheticOptions options;
  std::string output = "-";
  app.add_option("-o,--output", output, "output file ('-' for stdout)");
  app.add_option("--papers", options.papers, "number of papers")->check(CLI::PositiveNumber);
  app.add_option("--mean-references", options.mean_references, "mean reference count")->check(CLI::PositiveNumber);
  app.add_option("--topics", options.topics, "number of topical communities")->check(CLI::PositiveNumber);
  app.add_option("--affinity", options.topic_affinity, "probability of citing within the topic")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--founders", options.founders, "leading papers without references");
  app.add_option("--seed", options.seed, "random seed");
  app.add_option("--keyword", options.shared_keyword, "keyword carried by every paper (empty for none)");
  app.add_option("--terms", options.terms_per_topic, "keywords per topic");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    auto records = lmap::preferential_attachment_corpus(options);
    if (output == "-") {
      lmap::write_json_lines(records, std::cout);
    } else {
      std::ofstream out(output);
      if (!out) throw lmap::DataError("cannot write " + output);
      lmap::write_json_lines(records, out);
    }
  } catch (const lmap::UsageError& e) {
    std::cerr << "lmap_synth: " << e.what() << '\n';
    return 1;
  } catch (const lmap::DataError& e) {
    std::cerr << "lmap_synth: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "lmap_synth: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
