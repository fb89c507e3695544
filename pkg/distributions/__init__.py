# Distributions package
