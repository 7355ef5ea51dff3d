#include "expdist/grouped_data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "expdist/csv.hpp"
#include "expdist/errors.hpp"

namespace expdist {

const char* unit_name(Unit unit) { return unit == Unit::household ? "household" : "person"; }

Unit unit_from_name(const std::string& name) {
  if (name == "household" || name == "households") return Unit::household;
  if (name == "person" || name == "persons") return Unit::person;
  raise(Errc::bad_input, "unknown unit '" + name + "' (household|person)");
}

const char* sector_name(Sector sector) { return sector == Sector::rural ? "rural" : "urban"; }

Sector sector_from_name(const std::string& name) {
  if (name == "rural") return Sector::rural;
  if (name == "urban") return Sector::urban;
  raise(Errc::bad_input, "unknown sector '" + name + "' (rural|urban)");
}

bool ExpenditureClass::open_top() const { return std::isinf(upper); }

long GroupedSample::total_freq(Unit u) const {
  long total = 0;
  for (const auto& cls : classes) total += cls.freq(u);
  return total;
}

std::vector<double> GroupedSample::interior_limits() const {
  std::vector<double> limits;
  limits.reserve(classes.size() > 0 ? classes.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < classes.size(); ++i) limits.push_back(classes[i].upper);
  return limits;
}

std::vector<double> GroupedSample::class_means() const {
  std::vector<double> means;
  means.reserve(classes.size());
  for (const auto& cls : classes) {
    if (!cls.class_mean)
      raise(Errc::missing_class_means, "class [" + std::to_string(cls.lower) + ", " +
                                           std::to_string(cls.upper) + ") has no mean");
    means.push_back(*cls.class_mean);
  }
  return means;
}

bool GroupedSample::has_all_means() const {
  return std::all_of(classes.begin(), classes.end(),
                     [](const ExpenditureClass& c) { return c.class_mean.has_value(); });
}

void validate(const GroupedSample& sample, long freq_slack) {
  const auto& classes = sample.classes;
  if (classes.size() < 3)
    raise(Errc::too_few_classes,
          "need at least 3 classes, got " + std::to_string(classes.size()));
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto& cls = classes[i];
    if (cls.lower < 0.0)
      raise(Errc::malformed_row, "class " + std::to_string(i) + ": negative lower limit");
    if (!(cls.lower < cls.upper))
      raise(Errc::malformed_row, "class " + std::to_string(i) + ": lower must be < upper");
    if (cls.open_top() && i + 1 != classes.size())
      raise(Errc::non_contiguous_classes,
            "only the last class may have an infinite upper limit");
    if (i + 1 < classes.size() && classes[i + 1].lower != cls.upper)
      raise(Errc::non_contiguous_classes,
            "class " + std::to_string(i + 1) + " does not start at the previous upper limit");
    if (cls.freq_households < 0 || cls.freq_persons < 0)
      raise(Errc::malformed_row, "class " + std::to_string(i) + ": negative frequency");
    if (cls.class_mean) {
      const double m = *cls.class_mean;
      const bool ok = cls.open_top() ? m >= cls.lower : (m >= cls.lower && m <= cls.upper);
      if (!ok)
        raise(Errc::mean_outside_class,
              "class " + std::to_string(i) + ": mean " + std::to_string(m) +
                  " outside [" + std::to_string(cls.lower) + ", " + std::to_string(cls.upper) +
                  "]");
    }
  }
  const long total = sample.total_freq(sample.unit);
  if (std::labs(total - 1000) > freq_slack)
    raise(Errc::frequency_sum_mismatch,
          std::string(unit_name(sample.unit)) + " frequencies sum to " + std::to_string(total) +
              ", expected 1000" +
              (freq_slack > 0 ? " (+/- " + std::to_string(freq_slack) + ")" : ""));
}

GroupedSample load_grouped_csv(const std::string& path, Unit unit, SampleMeta meta) {
  const csv::Table table = csv::read_file(path);
  const std::vector<std::string> expected = {"lower", "upper", "class_mean", "freq_households",
                                             "freq_persons"};
  if (table.header != expected)
    raise(Errc::missing_header,
          "expected header 'lower,upper,class_mean,freq_households,freq_persons' in " + path);

  GroupedSample sample;
  sample.unit = unit;
  sample.sector = meta.sector;
  sample.round_label =
      meta.round_label.empty() ? std::filesystem::path(path).stem().string() : meta.round_label;
  sample.survey_midpoint = meta.survey_midpoint;

  std::size_t row_index = 1;
  for (const auto& row : table.rows) {
    ++row_index;
    if (row.size() != 5)
      raise(Errc::malformed_row,
            "row " + std::to_string(row_index) + ": expected 5 cells, got " +
                std::to_string(row.size()));
    ExpenditureClass cls;
    cls.lower = csv::to_number(row[0], row_index);
    cls.upper = csv::to_number_or_inf(row[1], row_index);
    cls.class_mean = csv::to_optional_number(row[2], row_index);
    cls.freq_households = csv::to_integer(row[3], row_index);
    cls.freq_persons = csv::to_integer(row[4], row_index);
    sample.classes.push_back(cls);
  }
  validate(sample, meta.freq_slack);
  return sample;
}

void write_grouped_csv(const std::string& path, const GroupedSample& sample) {
  csv::Table table;
  table.header = {"lower", "upper", "class_mean", "freq_households", "freq_persons"};
  for (const auto& cls : sample.classes) {
    table.rows.push_back({csv::format_number(cls.lower), csv::format_number(cls.upper),
                          cls.class_mean ? csv::format_number(*cls.class_mean) : "",
                          std::to_string(cls.freq_households),
                          std::to_string(cls.freq_persons)});
  }
  csv::write_file(path, table);
}

DeflatorSeries load_deflators_csv(const std::string& path) {
  const csv::Table table = csv::read_file(path);
  if (table.header != std::vector<std::string>{"round_label", "index"})
    raise(Errc::missing_header, "expected header 'round_label,index' in " + path);
  DeflatorSeries series;
  std::size_t row_index = 1;
  for (const auto& row : table.rows) {
    ++row_index;
    if (row.size() != 2)
      raise(Errc::malformed_row, "row " + std::to_string(row_index) + ": expected 2 cells");
    const double index = csv::to_number(row[1], row_index);
    if (!(index > 0.0))
      raise(Errc::malformed_row,
            "row " + std::to_string(row_index) + ": deflator index must be positive");
    series.entries[row[0]] = index;
  }
  return series;
}

GroupedSample deflate(const GroupedSample& sample, const DeflatorSeries& series) {
  const auto it = series.entries.find(sample.round_label);
  if (it == series.entries.end())
    raise(Errc::missing_deflator, "no deflator for round '" + sample.round_label + "'");
  const double index = it->second;
  GroupedSample out = sample;
  for (auto& cls : out.classes) {
    cls.lower /= index;
    cls.upper /= index;  // inf stays inf
    if (cls.class_mean) cls.class_mean = *cls.class_mean / index;
  }
  return out;
}

SectorWeights load_sector_weights_csv(const std::string& path) {
  const csv::Table table = csv::read_file(path);
  if (table.header != std::vector<std::string>{"year", "rural_count", "urban_count"})
    raise(Errc::missing_header, "expected header 'year,rural_count,urban_count' in " + path);
  SectorWeights weights;
  std::size_t row_index = 1;
  for (const auto& row : table.rows) {
    ++row_index;
    if (row.size() != 3)
      raise(Errc::malformed_row, "row " + std::to_string(row_index) + ": expected 3 cells");
    weights.anchors.push_back({csv::to_number(row[0], row_index),
                               csv::to_number(row[1], row_index),
                               csv::to_number(row[2], row_index)});
  }
  return weights;
}

SectorShares sector_weight(const SectorWeights& weights, double year) {
  const auto& anchors = weights.anchors;
  if (anchors.size() < 2)
    raise(Errc::invalid_config, "sector_weight needs at least 2 anchors");
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (!(anchors[i].rural_count > 0.0) || !(anchors[i].urban_count > 0.0))
      raise(Errc::invalid_config, "sector counts must be positive");
    if (i > 0 && !(anchors[i].year > anchors[i - 1].year))
      raise(Errc::invalid_config, "anchor years must be strictly increasing");
  }

  // segment for interpolation; first/last segment extended for extrapolation
  std::size_t hi = 1;
  while (hi + 1 < anchors.size() && anchors[hi].year < year) ++hi;
  const auto& a = anchors[hi - 1];
  const auto& b = anchors[hi];
  const double t = (year - a.year) / (b.year - a.year);
  const double rural = a.rural_count + t * (b.rural_count - a.rural_count);
  const double urban = a.urban_count + t * (b.urban_count - a.urban_count);
  const double total = rural + urban;
  if (!(total > 0.0))
    raise(Errc::invalid_config, "extrapolated counts are not positive at year " +
                                    std::to_string(year));
  return {rural / total, urban / total};
}

double parse_round_midpoint(const std::string& label, TimeEncoding encoding) {
  const auto dash = label.find('-');
  const std::string first = dash == std::string::npos ? label : label.substr(0, dash);
  std::size_t pos = 0;
  double year = 0.0;
  try {
    year = std::stod(first, &pos);
  } catch (const std::exception&) {
    raise(Errc::bad_input, "cannot parse round label '" + label + "'");
  }
  if (pos != first.size() || year < 1000.0 || year > 3000.0)
    raise(Errc::bad_input, "cannot parse round label '" + label + "'");
  if (encoding == TimeEncoding::span_mid && dash != std::string::npos) return year + 1.0;
  return year + 0.5;
}

}  // namespace expdist
