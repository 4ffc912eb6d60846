#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "addgeo/groups.hpp"
#include "addgeo/projsys.hpp"

namespace addgeo {

/// Syntax error with a 1-based position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Claimed parameters of a dataset.  Every present value is checked by
/// certify(); absent values are not.
struct Claims {
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> s;
  std::optional<std::uint64_t> mu;
  std::optional<bool> faithful;
  // claim multispread lambda=.. mu=..
  std::optional<std::uint64_t> ms_lambda;
  std::optional<std::uint64_t> ms_mu;

  bool operator==(const Claims&) const = default;
};

struct GeneratorSpec {
  std::uint32_t frob = 0;
  Matrix mat;

  bool operator==(const GeneratorSpec&) const = default;
};

/// One listed element: its generator rows as written and the orbit size
/// annotation, if any.
struct DatasetEntry {
  Matrix rows;
  std::optional<std::size_t> orbit;

  bool operator==(const DatasetEntry&) const = default;
};

struct Dataset {
  std::vector<std::string> comments;  // without the leading '#'
  FieldPtr field;
  std::size_t r = 0;
  std::size_t h = 0;
  Claims claims;
  std::vector<GeneratorSpec> generators;
  std::vector<DatasetEntry> entries;

  bool operator==(const Dataset& o) const {
    return comments == o.comments && field.get() == o.field.get() && r == o.r && h == o.h && claims == o.claims &&
           generators == o.generators && entries == o.entries;
  }
};

/// Reads the text format:
///
///   # comment
///   field p=<p> l=<l>
///   ambient r=<r>
///   blockdim h=<h>
///   claim n=<n> s=<s> [mu=<mu>] [faithful=<0|1>]
///   claim multispread lambda=<lambda> mu=<mu>
///   gen frob=<e>          followed by r rows of r tokens
///   elem [orbit=<size>]   followed by the element's generator rows
///
/// Throws ParseError on malformed input.
Dataset parse(std::string_view text);
Dataset load_dataset(const std::string& path);

/// Canonical text: comments, header, claims, generators, entries; LF line
/// endings, single spaces, no trailing blanks.
std::string serialize(const Dataset& ds);

/// Dataset listing every element of a system without group data, claiming
/// its verified parameters.
Dataset dataset_from_system(const ProjSystem& sys, std::vector<std::string> comments = {});

/// Generators under the given convention and the expanded system.  Throws
/// Error on any listing mismatch.
Group dataset_group(const Dataset& ds, ActionConvention c = ActionConvention::right);
ProjSystem expand_dataset(const Dataset& ds, ActionConvention c = ActionConvention::right);

struct ClaimResult {
  std::string name;
  bool pass = false;
  std::string claimed;
  std::string actual;
  std::string witness;  // offending hyperplane, point or element
};

struct Certificate {
  bool pass = false;
  std::string digest;  // FNV-1a 64 of the canonical serialization
  std::string convention;
  std::vector<std::string> convention_errors;  // conventions tried before the one used
  std::size_t group_order = 1;
  std::optional<SystemReport> report;
  std::optional<MultispreadReport> multispread;
  std::vector<ClaimResult> claims;
  std::string error;  // listing expansion failure, if any

  /// First failed claim or the expansion error; empty on pass.
  std::string first_failure() const;
};

/// Rechecks every claim from scratch.  Failures are reported in the
/// certificate, never thrown.
Certificate certify(const Dataset& ds);

/// Line-oriented key=value records.
std::string to_records(const Certificate& cert, const std::string& label);

std::string digest(std::string_view text);

}  // namespace addgeo
