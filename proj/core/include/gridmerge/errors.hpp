/*
 * Copyright 2026 The GridMerge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GRIDMERGE_ERRORS_HPP_
#define GRIDMERGE_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace gridmerge {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// File could not be opened, read, or written.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

// File exists but its content does not match the expected format.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(what) {}
};

// A JSON document does not match the expected schema.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(what) {}
};

class ResolutionMismatch : public Error {
 public:
  explicit ResolutionMismatch(const std::string& what) : Error(what) {}
};

class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& what) : Error(what) {}
};

class ImageTooSmall : public Error {
 public:
  explicit ImageTooSmall(const std::string& what) : Error(what) {}
};

// Descriptor support window leaves the image; the keypoint must be dropped.
class OutOfBounds : public Error {
 public:
  explicit OutOfBounds(const std::string& what) : Error(what) {}
};

// All source points coincide; rotation is unobservable.
class DegenerateInput : public Error {
 public:
  explicit DegenerateInput(const std::string& what) : Error(what) {}
};

class TooFewMatches : public Error {
 public:
  explicit TooFewMatches(const std::string& what) : Error(what) {}
};

class TooFewPoints : public Error {
 public:
  explicit TooFewPoints(const std::string& what) : Error(what) {}
};

class NonFiniteObjective : public Error {
 public:
  explicit NonFiniteObjective(const std::string& what) : Error(what) {}
};

class TooFewEdges : public Error {
 public:
  explicit TooFewEdges(const std::string& what) : Error(what) {}
};

class NotSpanning : public Error {
 public:
  explicit NotSpanning(const std::string& what) : Error(what) {}
};

class EmptyEdgeSet : public Error {
 public:
  explicit EmptyEdgeSet(const std::string& what) : Error(what) {}
};

class RankDeficient : public Error {
 public:
  explicit RankDeficient(const std::string& what) : Error(what) {}
};

class LengthMismatch : public Error {
 public:
  explicit LengthMismatch(const std::string& what) : Error(what) {}
};

class InfeasibleParams : public Error {
 public:
  explicit InfeasibleParams(const std::string& what) : Error(what) {}
};

class TooFewMaps : public Error {
 public:
  explicit TooFewMaps(const std::string& what) : Error(what) {}
};

// The pose graph splits into several connected components; carries one
// vertex list per component so callers can report which maps cannot be
// merged with the reference.
class GraphDisconnected : public Error {
 public:
  GraphDisconnected(const std::string& what,
                    std::vector<std::vector<int>> components)
      : Error(what), components_(std::move(components)) {}

  const std::vector<std::vector<int>>& components() const {
    return components_;
  }

 private:
  std::vector<std::vector<int>> components_;
};

}  // namespace gridmerge

#endif  // GRIDMERGE_ERRORS_HPP_
