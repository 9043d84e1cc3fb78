from src.catalog.enumerate import enumerate_monotone, monotone_masks, subset_masks
from src.catalog.specs import SetSpec, build, catalog_sets, catalog_specs, parse_state
