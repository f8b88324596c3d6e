// zffvad/error.h

// Copyright 2026  The zffvad authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ZFFVAD_ERROR_H_
#define ZFFVAD_ERROR_H_

#include <stdexcept>
#include <string>

namespace zffvad {

// All recoverable failures (bad files, bad configs, violated preconditions)
// surface as this type; the message names the condition and the offending
// value or path.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace zffvad

#endif  // ZFFVAD_ERROR_H_
