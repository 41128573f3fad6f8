// Synthetic study-shaped data for tests that need a full raw encounter CSV.
#pragma once

#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

// Writes a raw CSV matching the 13-column encounter schema: a few
// unknown/invalid genders, weight mostly missing, some missing races,
// admit codes 1-4. Days depend on num_meds and age so selection has
// signal to find. Returns the number of data rows written.
inline int write_raw_csv(const std::string& path, unsigned seed = 7, int n = 400,
                         int invalid_genders = 3) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick100(0, 99);
    const std::vector<std::string> ages = {"[0-10)",  "[10-20)", "[20-30)", "[30-40)",
                                           "[40-50)", "[50-60)", "[60-70)", "[70-80)",
                                           "[80-90)", "[90-100)"};
    const std::vector<std::string> races = {"Caucasian", "Caucasian", "Caucasian",
                                            "AfricanAmerican", "Asian", "Hispanic",
                                            "Other"};
    const std::vector<std::string> med_levels = {"No", "Down", "Steady", "Up"};
    const std::vector<std::string> readmit = {"NO", "<30", ">30"};

    std::ofstream out(path, std::ios::binary);
    out << "days,gender,age,race,weight,admit_type_id,metformin,insulin,readmitted,"
           "num_procs,num_meds,num_ip,num_diags\n";
    for (int i = 0; i < n; ++i) {
        std::string gender = (i < invalid_genders)
                                 ? "Unknown/Invalid"
                                 : (pick100(rng) < 53 ? "Female" : "Male");
        int age_idx = std::min(9, std::max(0, static_cast<int>(
                                                  std::normal_distribution<double>(
                                                      6.5, 1.8)(rng))));
        std::string race =
            pick100(rng) < 3 ? "?" : races[static_cast<std::size_t>(pick100(rng)) %
                                           races.size()];
        std::string weight = pick100(rng) < 97 ? "?" : "[75-100)";
        int admit = 1 + (pick100(rng) % 4);
        int num_meds = 1 + std::min(66, static_cast<int>(
                                            std::gamma_distribution<double>(4.0, 4.0)(
                                                rng)));
        int num_procs = pick100(rng) % 7;
        int num_ip = pick100(rng) % 4;
        int num_diags = 1 + pick100(rng) % 16;
        double log_mu = 0.7 + 0.03 * num_meds + 0.03 * num_diags +
                        0.04 * (age_idx - 5);
        int days = 1 + std::min(13, static_cast<int>(std::poisson_distribution<long>(
                                        std::exp(log_mu))(rng)));
        out << days << ',' << gender << ',' << ages[static_cast<std::size_t>(age_idx)]
            << ',' << race << ',' << weight << ',' << admit << ','
            << med_levels[static_cast<std::size_t>(pick100(rng)) % 4] << ','
            << med_levels[static_cast<std::size_t>(pick100(rng)) % 4] << ','
            << readmit[static_cast<std::size_t>(pick100(rng)) % 3] << ',' << num_procs
            << ',' << num_meds << ',' << num_ip << ',' << num_diags << '\n';
    }
    return n;
}

}  // namespace fixtures
