#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace expdist {

enum class Unit { household, person };
enum class Sector { rural, urban };

const char* unit_name(Unit unit);
Unit unit_from_name(const std::string& name);
const char* sector_name(Sector sector);
Sector sector_from_name(const std::string& name);

// One row of an NSSO-style grouped expenditure table: class limits in
// rupees/month, the mean expenditure of the class (absent in some rounds),
// and per-1000 frequencies for households and persons.
struct ExpenditureClass {
  double lower = 0.0;
  double upper = 0.0;  // +infinity marks the open top class
  std::optional<double> class_mean;
  long freq_households = 0;
  long freq_persons = 0;

  long freq(Unit unit) const { return unit == Unit::household ? freq_households : freq_persons; }
  bool open_top() const;
  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
};

struct GroupedSample {
  std::vector<ExpenditureClass> classes;
  Sector sector = Sector::rural;
  Unit unit = Unit::person;
  std::string round_label;
  double survey_midpoint = std::numeric_limits<double>::quiet_NaN();

  std::size_t size() const { return classes.size(); }
  long total_freq(Unit u) const;
  // Interior class limits z_1 .. z_{k-1}.
  std::vector<double> interior_limits() const;
  std::vector<double> class_means() const;  // throws missing_class_means if any absent
  bool has_all_means() const;
};

// Published per-1000 tables round to the nearest integer, so column sums of
// real NSSO tables land at 1000 +/- a few (the 2006-07 fixtures sum to
// 999..1003). Validation tolerates that by default; pass 0 for the strict
// Σ = 1000 check.
inline constexpr long kDefaultFreqSlack = 5;

void validate(const GroupedSample& sample, long freq_slack = kDefaultFreqSlack);

struct SampleMeta {
  Sector sector = Sector::rural;
  std::string round_label;  // defaults to the file stem
  double survey_midpoint = std::numeric_limits<double>::quiet_NaN();
  long freq_slack = kDefaultFreqSlack;
};

// CSV layout, one class per row:
//   lower,upper,class_mean,freq_households,freq_persons
// `upper` may be the literal `inf`; `class_mean` may be empty.
GroupedSample load_grouped_csv(const std::string& path, Unit unit, SampleMeta meta = {});
void write_grouped_csv(const std::string& path, const GroupedSample& sample);

struct DeflatorSeries {
  std::map<std::string, double> entries;  // round_label -> price index, base = 1
};

// CSV layout: round_label,index
DeflatorSeries load_deflators_csv(const std::string& path);

// Divides all class limits and means by the round's index; frequencies and
// metadata unchanged.
GroupedSample deflate(const GroupedSample& sample, const DeflatorSeries& series);

struct SectorWeights {
  struct Anchor {
    double year = 0.0;
    double rural_count = 0.0;
    double urban_count = 0.0;
  };
  std::vector<Anchor> anchors;  // strictly increasing years, >= 2 anchors
};

// CSV layout: year,rural_count,urban_count
SectorWeights load_sector_weights_csv(const std::string& path);

// Piecewise-linear interpolation (linear extrapolation outside the anchor
// range) of the census counts, normalized to shares summing to 1.
struct SectorShares {
  double rural = 0.0;
  double urban = 0.0;
};
SectorShares sector_weight(const SectorWeights& weights, double year);

enum class TimeEncoding { label_mid, span_mid };

// "2006-07" -> 2006.5 and "1983" -> 1983.5 under label_mid (the default);
// span_mid places two-year rounds at the span midpoint ("2006-07" -> 2007.0).
double parse_round_midpoint(const std::string& label,
                            TimeEncoding encoding = TimeEncoding::label_mid);

}  // namespace expdist
