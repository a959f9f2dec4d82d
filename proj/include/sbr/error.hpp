/*
 * Copyright 2026 sbrtune authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace sbr {

// Base for everything this library throws. The CLI maps ConfigError to
// exit code 2 and every other Error (or std::exception) to exit code 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user-supplied configuration: unknown names, invalid flag combinations,
// out-of-range tuner settings.
struct ConfigError : Error {
  using Error::Error;
};

// CSV header does not match the expected column schema.
struct SchemaError : Error {
  using Error::Error;
};

// A cell failed to parse; message carries the row index.
struct ParseError : Error {
  using Error::Error;
};

// Structurally valid input with illegal content (bad label, negative
// frequency, empty data section, degenerate arguments).
struct ValidationError : Error {
  using Error::Error;
};

// Matrix width/length mismatches between fit/train time and use time.
struct ShapeError : Error {
  using Error::Error;
};

// FARSEC keyword scoring preconditions (e.g. no positives to score).
struct FilterError : Error {
  using Error::Error;
};

// Learner preconditions (e.g. one-class training data).
struct TrainingError : Error {
  using Error::Error;
};

// SMOTE preconditions (fewer than two minority instances).
struct OversamplingError : Error {
  using Error::Error;
};

// Filesystem failures while reading or writing datasets/reports.
struct IoError : Error {
  using Error::Error;
};

}  // namespace sbr
