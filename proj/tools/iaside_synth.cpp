// Copyright 2026 The iaside Authors.
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

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "iaside/manifest.hpp"
#include "iaside/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Writes a synthetic 1/f^2 image dataset with a manifest"};
  iaside::SyntheticSpec spec;
  std::size_t size = 64;
  std::string out;
  app.add_option("--items", spec.items, "number of images")->capture_default_str();
  app.add_option("--classes", spec.classes, "number of classes")->capture_default_str();
  app.add_option("--size", size, "image height and width")->capture_default_str();
  app.add_option("--channels", spec.shape.channels, "1 or 3")->capture_default_str();
  app.add_option("--mix", spec.mix, "class prototype weight")->capture_default_str();
  app.add_option("--exponent", spec.exponent, "power spectrum falloff")->capture_default_str();
  app.add_option("--seed", spec.seed, "seed")->capture_default_str();
  app.add_option("--out", out, "manifest path")->required();
  CLI11_PARSE(app, argc, argv);
  try {
    spec.shape.height = size;
    spec.shape.width = size;
    iaside::write_dataset(out, iaside::synthetic_dataset(spec));
  } catch (const std::exception& e) {
    std::cerr << "iaside-synth: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
