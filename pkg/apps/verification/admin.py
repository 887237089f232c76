from django.contrib import admin

from .models import CheckResult, VerificationRun


class CheckResultInline(admin.TabularInline):
    model = CheckResult
    extra = 0
    fields = ['position', 'name', 'bigrade', 'status', 'witness']
    readonly_fields = fields


@admin.register(VerificationRun)
class VerificationRunAdmin(admin.ModelAdmin):
    list_display = ['mode', 'geometry_name', 'epsilon', 'degree_cap', 'exit_status', 'created_at']
    list_filter = ['mode', 'exit_status', 'weighted', 'created_at']
    search_fields = ['geometry_name', 'geometry_hash']
    inlines = [CheckResultInline]


@admin.register(CheckResult)
class CheckResultAdmin(admin.ModelAdmin):
    list_display = ['run', 'position', 'name', 'bigrade', 'status']
    list_filter = ['status', 'name']
    search_fields = ['name', 'witness']
