#pragma once

#include "tailidx/errors.hpp"
#include "tailidx/estimators.hpp"
#include "tailidx/ingest.hpp"
#include "tailidx/mcstudy.hpp"
#include "tailidx/philox.hpp"
#include "tailidx/record.hpp"
#include "tailidx/sampler.hpp"
