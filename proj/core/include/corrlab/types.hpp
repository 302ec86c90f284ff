#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace corrlab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// configuration problems map to CLI exit code 2
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class AmplitudeFloorViolation : public std::runtime_error {
public:
    AmplitudeFloorViolation(int slice, int site, double prob, double floor);
    int slice;
    int site;
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(double required, double budget);
    double required;
    double budget;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved);
    double achieved;
};

}  // namespace corrlab
