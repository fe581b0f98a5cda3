#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "kamnf/diophantine.hpp"
#include "kamnf/hamiltonian.hpp"
#include "kamnf/kam.hpp"

namespace kamnf::io {

// Header {d, sigma, r, floor_const, degree_cap, mode_radius} plus terms [{a, k, k_bar, j, re, im}], keys sorted.
std::string hamiltonian_to_json(const ham::Hamiltonian& h);
ham::Hamiltonian hamiltonian_from_json(std::string_view text);

// {d, omega: [{n, value}]}
std::string frequency_to_json(const dioph::FrequencyVector& omega);
dioph::FrequencyVector frequency_from_json(std::string_view text);

// Report fields, normal form and the three remainder classes after the step.
std::string step_dump_json(const kam::StepReport& report, const kam::KamState& state);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace kamnf::io
