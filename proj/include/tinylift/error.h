/* Copyright 2026 The TinyLift Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef TINYLIFT_ERROR_H_
#define TINYLIFT_ERROR_H_

#include <stdexcept>
#include <string>

namespace tinylift {

// Exception carrying a module-specific error code. Each module declares its
// own code enum and a `to_string(Code)` overload, and throws Error<Code>.
template <typename Code>
class Error : public std::runtime_error {
 public:
  Error(Code code, const std::string& detail)
      : std::runtime_error(to_string(code) + (detail.empty() ? "" : ": " + detail)),
        code_(code) {}
  explicit Error(Code code) : Error(code, "") {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

}  // namespace tinylift

#endif  // TINYLIFT_ERROR_H_
