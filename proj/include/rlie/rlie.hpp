#pragma once

#include "rlie/field.hpp"
#include "rlie/sparse.hpp"
#include "rlie/linalg.hpp"
#include "rlie/algebra.hpp"
#include "rlie/grading.hpp"
#include "rlie/constructors.hpp"
#include "rlie/cohomology.hpp"
#include "rlie/restricted.hpp"
#include "rlie/extensions.hpp"
#include "rlie/io.hpp"
#include "rlie/report.hpp"
