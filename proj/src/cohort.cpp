#include "indicate/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "indicate/csv.hpp"
#include "indicate/errors.hpp"

namespace indicate {

void validate_unit(const CohortUnit& unit) {
    const std::string& id = unit.unit_id;
    if (unit.treated) {
        if (!unit.indication_day) {
            throw ValidationError("treated unit without indication_day: " + id);
        }
        if (*unit.indication_day < 0 || *unit.indication_day > unit.followup_end_day) {
            throw ValidationError("indication_day outside follow-up for unit " + id);
        }
    } else if (unit.indication_day) {
        throw ValidationError("untreated unit with indication_day present: " + id);
    }
    if (unit.death_day) {
        if (*unit.death_day < 0 || *unit.death_day > unit.followup_end_day) {
            throw ValidationError("death_day after followup_end_day for unit " + id);
        }
    }
    if (unit.followup_end_day < 0) {
        throw ValidationError("negative followup_end_day for unit " + id);
    }
    if (unit.visits.empty()) {
        throw ValidationError("unit without visits: " + id);
    }
    if (unit.visits.front().day != 0) {
        throw ValidationError("first visit not at day 0 for unit " + id);
    }
    for (std::size_t i = 1; i < unit.visits.size(); ++i) {
        if (unit.visits[i].day <= unit.visits[i - 1].day) {
            throw ValidationError("visit days not strictly increasing for unit " + id);
        }
    }
    const auto p1 = unit.visits.front().values.size();
    for (const auto& v : unit.visits) {
        if (v.values.size() != p1) {
            throw ValidationError("inconsistent visit width for unit " + id);
        }
    }
}

Cohort load_cohort(const std::string& units_file, const std::string& visits_file) {
    const auto units_tab = csv::read_file(units_file);
    const auto id_col = units_tab.column("unit_id", units_file);
    const auto treated_col = units_tab.column("treated", units_file);
    const auto ind_col = units_tab.column("indication_day", units_file);
    const auto death_col = units_tab.column("death_day", units_file);
    const auto fup_col = units_tab.column("followup_end_day", units_file);
    const auto cal_col = units_tab.column("calendar_entry", units_file);
    const auto base_cols = units_tab.columns_with_prefix("x0_");

    Cohort cohort;
    for (auto c : base_cols) cohort.baseline_names.push_back(units_tab.header[c]);

    std::unordered_map<std::string, std::size_t> index;
    for (const auto& row : units_tab.rows) {
        CohortUnit unit;
        unit.unit_id = row[id_col];
        if (unit.unit_id.empty()) throw ValidationError("empty unit_id in " + units_file);
        if (index.count(unit.unit_id)) {
            throw ValidationError("duplicate unit_id: " + unit.unit_id);
        }
        const std::string ctx = "unit " + unit.unit_id;
        const int treated = csv::parse_int(row[treated_col], ctx);
        if (treated != 0 && treated != 1) {
            throw ValidationError("treated flag must be 0 or 1 for unit " + unit.unit_id);
        }
        unit.treated = treated == 1;
        unit.indication_day = csv::parse_optional_int(row[ind_col], ctx);
        unit.death_day = csv::parse_optional_int(row[death_col], ctx);
        unit.followup_end_day = csv::parse_int(row[fup_col], ctx);
        unit.exogenous.resize(1);
        unit.exogenous(0) = csv::parse_double(row[cal_col], ctx);
        unit.baseline.resize(static_cast<Eigen::Index>(base_cols.size()));
        for (std::size_t j = 0; j < base_cols.size(); ++j) {
            unit.baseline(static_cast<Eigen::Index>(j)) = csv::parse_double(row[base_cols[j]], ctx);
        }
        index.emplace(unit.unit_id, cohort.units.size());
        cohort.units.push_back(std::move(unit));
    }

    const auto visits_tab = csv::read_file(visits_file);
    const auto vid_col = visits_tab.column("unit_id", visits_file);
    const auto day_col = visits_tab.column("day", visits_file);
    const auto val_cols = visits_tab.columns_with_prefix("v_");
    for (auto c : val_cols) cohort.visit_names.push_back(visits_tab.header[c]);

    for (const auto& row : visits_tab.rows) {
        const auto it = index.find(row[vid_col]);
        if (it == index.end()) {
            throw ValidationError("visit for unknown unit_id: " + row[vid_col]);
        }
        const std::string ctx = "visit for unit " + row[vid_col];
        Visit visit;
        visit.day = csv::parse_int(row[day_col], ctx);
        if (visit.day < 0) throw ValidationError("negative visit day for unit " + row[vid_col]);
        visit.values.resize(static_cast<Eigen::Index>(val_cols.size()));
        for (std::size_t j = 0; j < val_cols.size(); ++j) {
            visit.values(static_cast<Eigen::Index>(j)) = csv::parse_double(row[val_cols[j]], ctx);
        }
        cohort.units[it->second].visits.push_back(std::move(visit));
    }

    for (const auto& unit : cohort.units) validate_unit(unit);
    return cohort;
}

void write_cohort(const Cohort& cohort, const std::string& units_file, const std::string& visits_file) {
    csv::Writer units(units_file);
    std::vector<std::string> header = {"unit_id", "treated", "indication_day", "death_day",
                                       "followup_end_day", "calendar_entry"};
    for (const auto& name : cohort.baseline_names) header.push_back(name);
    units.write_row(header);
    for (const auto& u : cohort.units) {
        std::vector<std::string> row = {u.unit_id,
                                        csv::format_int(u.treated ? 1 : 0),
                                        csv::format_optional_int(u.indication_day),
                                        csv::format_optional_int(u.death_day),
                                        csv::format_int(u.followup_end_day),
                                        csv::format_double(u.calendar_entry())};
        for (Eigen::Index j = 0; j < u.baseline.size(); ++j) {
            row.push_back(csv::format_double(u.baseline(j)));
        }
        units.write_row(row);
    }
    units.close();

    csv::Writer visits(visits_file);
    std::vector<std::string> vheader = {"unit_id", "day"};
    for (const auto& name : cohort.visit_names) vheader.push_back(name);
    visits.write_row(vheader);
    for (const auto& u : cohort.units) {
        for (const auto& v : u.visits) {
            std::vector<std::string> row = {u.unit_id, csv::format_int(v.day)};
            for (Eigen::Index j = 0; j < v.values.size(); ++j) {
                row.push_back(csv::format_double(v.values(j)));
            }
            visits.write_row(row);
        }
    }
    visits.close();
}

Standardization compute_standardization(std::span<const CohortUnit> units) {
    if (units.empty()) throw ValidationError("standardization requires at least one unit");
    const Eigen::Index p0 = units.front().baseline.size();
    const Eigen::Index p1 = units.front().visits.empty() ? 0 : units.front().visits.front().values.size();

    Standardization out;
    out.baseline_mean = Eigen::VectorXd::Zero(p0);
    out.baseline_sd = Eigen::VectorXd::Ones(p0);
    out.visit_mean = Eigen::VectorXd::Zero(p1);
    out.visit_sd = Eigen::VectorXd::Ones(p1);

    if (p0 > 0) {
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(p0);
        Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(p0);
        for (const auto& u : units) {
            sum += u.baseline;
            sumsq += u.baseline.cwiseProduct(u.baseline);
        }
        const double n = static_cast<double>(units.size());
        out.baseline_mean = sum / n;
        if (units.size() > 1) {
            for (Eigen::Index j = 0; j < p0; ++j) {
                const double var = (sumsq(j) - n * out.baseline_mean(j) * out.baseline_mean(j)) / (n - 1.0);
                out.baseline_sd(j) = var > 1e-24 ? std::sqrt(var) : 1.0;
            }
        }
    }

    if (p1 > 0) {
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(p1);
        Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(p1);
        double n = 0.0;
        for (const auto& u : units) {
            for (const auto& v : u.visits) {
                sum += v.values;
                sumsq += v.values.cwiseProduct(v.values);
                n += 1.0;
            }
        }
        out.visit_mean = sum / n;
        if (n > 1.5) {
            for (Eigen::Index j = 0; j < p1; ++j) {
                const double var = (sumsq(j) - n * out.visit_mean(j) * out.visit_mean(j)) / (n - 1.0);
                out.visit_sd(j) = var > 1e-24 ? std::sqrt(var) : 1.0;
            }
        }
    }
    return out;
}

DailyPanel build_panel(const CohortUnit& unit, int K, const Standardization& std) {
    if (K < 0) throw ValidationError("build_panel: K must be non-negative (unit " + unit.unit_id + ")");
    if (unit.visits.empty()) throw ValidationError("build_panel: unit has no visits: " + unit.unit_id);

    const Eigen::Index p1 = unit.visits.front().values.size();
    DailyPanel panel;
    panel.unit_id = unit.unit_id;
    panel.rows.resize(K + 1, p1);

    std::size_t next_visit = 0;
    Eigen::VectorXd current = unit.visits.front().values;
    for (int day = 0; day <= K; ++day) {
        while (next_visit < unit.visits.size() && unit.visits[next_visit].day <= day) {
            current = unit.visits[next_visit].values;
            ++next_visit;
        }
        for (Eigen::Index j = 0; j < p1; ++j) {
            panel.rows(day, j) = (current(j) - std.visit_mean(j)) / std.visit_sd(j);
        }
    }
    return panel;
}

Eigen::VectorXd standardize_baseline(const CohortUnit& unit, const Standardization& std) {
    return (unit.baseline - std.baseline_mean).cwiseQuotient(std.baseline_sd);
}

Eigen::MatrixXd design_matrix(const CohortUnit& unit, const DailyPanel& panel, const Standardization& std) {
    const Eigen::Index p0 = unit.baseline.size();
    const Eigen::Index p1 = panel.rows.cols();
    Eigen::MatrixXd design(panel.rows.rows(), p0 + p1);
    if (p0 > 0) {
        design.leftCols(p0) = standardize_baseline(unit, std).transpose().replicate(design.rows(), 1);
    }
    if (p1 > 0) {
        design.rightCols(p1) = panel.rows;
    }
    return design;
}

bool eligibility_flag(const std::optional<int>& T, int K) {
    return T.has_value() && *T <= K;
}

Cohort select_covariates(const Cohort& cohort, const std::vector<std::string>& baseline_cols,
                         const std::vector<std::string>& visit_cols) {
    auto pick_indices = [](const std::vector<std::string>& available, const std::vector<std::string>& wanted) {
        std::vector<Eigen::Index> idx;
        for (const auto& name : wanted) {
            const auto it = std::find(available.begin(), available.end(), name);
            if (it == available.end()) {
                throw ValidationError("configured covariate not present in data: " + name);
            }
            idx.push_back(static_cast<Eigen::Index>(it - available.begin()));
        }
        return idx;
    };

    if (baseline_cols.empty() && visit_cols.empty()) return cohort;

    Cohort out = cohort;
    if (!baseline_cols.empty()) {
        const auto idx = pick_indices(cohort.baseline_names, baseline_cols);
        out.baseline_names = baseline_cols;
        for (auto& u : out.units) {
            Eigen::VectorXd b(idx.size());
            for (std::size_t j = 0; j < idx.size(); ++j) b(static_cast<Eigen::Index>(j)) = u.baseline(idx[j]);
            u.baseline = std::move(b);
        }
    }
    if (!visit_cols.empty()) {
        const auto idx = pick_indices(cohort.visit_names, visit_cols);
        out.visit_names = visit_cols;
        for (auto& u : out.units) {
            for (auto& v : u.visits) {
                Eigen::VectorXd vals(idx.size());
                for (std::size_t j = 0; j < idx.size(); ++j) vals(static_cast<Eigen::Index>(j)) = v.values(idx[j]);
                v.values = std::move(vals);
            }
        }
    }
    return out;
}

}  // namespace indicate
