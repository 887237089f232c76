"""
URL configuration for the derhamlab project.

Only the admin is served; it lists stored verification runs.
"""

from django.contrib import admin
from django.urls import path

urlpatterns = [
    path("admin/", admin.site.urls),
]
