"""Wandering Fatou domains over equal-characteristic non-archimedean fields."""
