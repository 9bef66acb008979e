// Copyright 2026 The dgsum Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Writes a synthetic design-meeting corpus and a matching split manifest.
//
//   make_synthetic_corpus --out corpus.jsonl [--splits splits.txt]
//                         [--meetings 12] [--min-utterances 4]
//                         [--max-utterances 8] [--seed 7]

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dgsum/corpus.hpp"
#include "dgsum/synthetic.hpp"

int main(int argc, char** argv) {
  dgsum::SyntheticOptions options;
  std::string out_path, splits_path;
  double dev_fraction = 0.2, test_fraction = 0.2;

  CLI::App app{"Synthetic meeting corpus generator"};
  app.add_option("--out", out_path)->required();
  app.add_option("--splits", splits_path, "also write a train/dev/test manifest");
  app.add_option("--meetings", options.meetings)->check(CLI::PositiveNumber);
  app.add_option("--min-utterances", options.min_utterances)->check(CLI::Range(4, 64));
  app.add_option("--max-utterances", options.max_utterances)->check(CLI::Range(4, 64));
  app.add_option("--seed", options.seed);
  app.add_option("--dev-fraction", dev_fraction)->check(CLI::Range(0.0, 1.0));
  app.add_option("--test-fraction", test_fraction)->check(CLI::Range(0.0, 1.0));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (options.max_utterances < options.min_utterances || dev_fraction + test_fraction >= 1.0) {
    std::cerr << "inconsistent options\n";
    return 2;
  }

  try {
    const auto meetings = dgsum::make_synthetic_corpus(options);
    dgsum::save_meetings(out_path, meetings);
    if (!splits_path.empty()) {
      const auto n = static_cast<int>(meetings.size());
      const int n_test = static_cast<int>(test_fraction * n);
      const int n_dev = static_cast<int>(dev_fraction * n);
      const int n_train = n - n_dev - n_test;
      std::ofstream splits(splits_path, std::ios::trunc);
      splits << "[train]\n";
      for (int i = 0; i < n; ++i) {
        if (i == n_train) splits << "[dev]\n";
        if (i == n_train + n_dev) splits << "[test]\n";
        splits << meetings[i].id << '\n';
      }
      if (n_dev == 0) splits << "[dev]\n";
      if (n_test == 0) splits << "[test]\n";
    }
    std::cout << "meetings " << meetings.size() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
