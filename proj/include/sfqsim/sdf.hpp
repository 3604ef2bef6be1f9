#pragma once

#include "sfqsim/cell.hpp"
#include "sfqsim/diagnostics.hpp"
#include "sfqsim/netlist.hpp"
#include "sfqsim/time.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sfqsim {

enum class DelayCorner { Min, Typ, Max };

std::optional<DelayCorner> parse_corner(std::string_view text);
std::string_view corner_name(DelayCorner corner);

/// One SDF rvalue `(min:typ:max)`. Members may be absent.
struct DelayTriple {
  std::optional<SimTime> min;
  std::optional<SimTime> typ;
  std::optional<SimTime> max;

  static DelayTriple uniform(SimTime v) { return {std::nullopt, v, std::nullopt}; }

  /// The requested member, falling back to typ, then min, then max.
  SimTime select(DelayCorner corner) const;
  bool empty() const { return !min && !typ && !max; }
  bool operator==(const DelayTriple &) const = default;
};

enum class EdgeSpec { Any, Posedge, Negedge };

struct IopathKey {
  std::string input;
  EdgeSpec edge = EdgeSpec::Any;
  std::string output;

  auto operator<=>(const IopathKey &) const = default;
};

/// SETUP/HOLD operands: data port first, clock reference second.
struct CheckKey {
  std::string data;
  EdgeSpec data_edge = EdgeSpec::Any;
  std::string clock;
  EdgeSpec clock_edge = EdgeSpec::Any;

  auto operator<=>(const CheckKey &) const = default;
};

struct CellAnnotation {
  std::string celltype;
  std::map<IopathKey, DelayTriple> iopaths;
  std::map<CheckKey, DelayTriple> setups;
  std::map<CheckKey, DelayTriple> holds;

  bool operator==(const CellAnnotation &) const = default;
};

struct SdfHeader {
  std::optional<std::string> sdf_version;
  std::optional<std::string> design;
  std::optional<std::string> date;
  std::optional<std::string> vendor;
  std::optional<std::string> program;
  std::optional<std::string> version;
  std::int64_t timescale_fs = 1000000; ///< 1ns when TIMESCALE is absent

  bool operator==(const SdfHeader &) const = default;
};

/// Parsed SDF with every time in femtoseconds. Instance paths and port
/// paths use `.` as the hierarchy divider regardless of the file's DIVIDER.
struct AnnotationDb {
  SdfHeader header;
  /// Keyed by instance path; "" is the top-level cell.
  std::map<std::string, CellAnnotation> cells;
  /// Keyed by (source port path, sink port path), both absolute.
  std::map<std::pair<std::string, std::string>, DelayTriple> interconnects;
  /// Non-fatal findings, e.g. collapsed rise/fall values. Not compared.
  std::vector<Diagnostic> warnings;

  bool operator==(const AnnotationDb &o) const {
    return header == o.header && cells == o.cells && interconnects == o.interconnects;
  }
};

/// Throws ParseError on syntax errors, unsupported constructs, bad
/// timescales, negative or inexact values, and duplicate keys.
AnnotationDb parse_sdf(std::string_view text, std::string_view file = "<sdf>");
AnnotationDb load_sdf(const std::string &path);

/// Canonical SDF text. parse_sdf(write_sdf(db)) == db, and writing the
/// re-parsed database reproduces the same bytes.
std::string write_sdf(const AnnotationDb &db);

// ---------------------------------------------------------------------------
// Resolution against a flattened netlist.
// ---------------------------------------------------------------------------

enum class TimingOrigin { Library, Sdf };

struct TimingValue {
  DelayTriple value;
  TimingOrigin origin = TimingOrigin::Library;

  SimTime at(DelayCorner corner) const { return value.select(corner); }
  bool operator==(const TimingValue &) const = default;
};

struct InstanceTiming {
  std::map<TimingArc, TimingValue> iopath;
  /// Keyed by data port name.
  std::map<std::string, TimingValue, std::less<>> setup;
  std::map<std::string, TimingValue, std::less<>> hold;
};

/// Effective timing for every instance: SDF values where annotated, library
/// defaults elsewhere. Indexed by InstanceId.
struct ResolvedTiming {
  std::vector<InstanceTiming> instances;
  /// Keyed by the sink port; absent means zero delay.
  std::map<PortRef, TimingValue> interconnect;

  static ResolvedTiming library_defaults(const Netlist &netlist);

  SimTime delay(InstanceId inst, const TimingArc &arc, DelayCorner corner) const;
  SimTime interconnect_delay(PortRef sink, DelayCorner corner) const;
};

struct ResolveReport {
  ResolvedTiming timing;
  /// One entry per SDF annotation that could not be applied.
  std::vector<Diagnostic> unresolved;
};

/// Applies every entry it can and lists the rest.
ResolveReport resolve_report(const AnnotationDb &db, const Netlist &netlist);

/// Throws ResolutionError when any entry cannot be applied.
ResolvedTiming resolve(const AnnotationDb &db, const Netlist &netlist);

/// Effective timing as an annotation database: one CELL per instance with
/// every IOPATH and timing check, plus the annotated interconnects.
AnnotationDb to_annotation_db(const Netlist &netlist, const ResolvedTiming &timing);

} // namespace sfqsim
