// Copyright 2026 The RelEmb Authors.
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


// Writes a synthetic tagged corpus and SemEval-format train/test files:
//   gen_synthetic <out_dir> [sentences] [train] [test]

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "synthetic.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: gen_synthetic <out_dir> [sentences] [train] [test]\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  const std::size_t sentences = argc > 2 ? std::stoul(argv[2]) : 4000;
  const std::size_t train = argc > 3 ? std::stoul(argv[3]) : 300;
  const std::size_t test = argc > 4 ? std::stoul(argv[4]) : 200;
  std::filesystem::create_directories(dir);

  relemb::testing::SyntheticSpec spec;
  const relemb::testing::SyntheticWorld world(spec);
  std::ofstream(dir / "corpus.tsv")
      << relemb::testing::tagged_corpus_text(world.tagged_corpus(sentences, 11));
  std::ofstream(dir / "train.txt") << world.semeval_text(train, 21);
  std::ofstream(dir / "test.txt") << world.semeval_text(test, 22, 10001);
  return 0;
}
