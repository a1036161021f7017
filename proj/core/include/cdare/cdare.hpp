#pragma once

#include "cdare/benchgen.hpp"
#include "cdare/cdare_model.hpp"
#include "cdare/dare_transform.hpp"
#include "cdare/errors.hpp"
#include "cdare/hermitian.hpp"
#include "cdare/solvers.hpp"
