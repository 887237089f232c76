# Generated by Django 5.2.5

import django.db.models.deletion
import django.utils.timezone
from django.db import migrations, models


class Migration(migrations.Migration):
    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="VerificationRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("created_at", models.DateTimeField(default=django.utils.timezone.now)),
                ("updated_at", models.DateTimeField(auto_now=True)),
                ("is_active", models.BooleanField(default=True)),
                (
                    "mode",
                    models.CharField(
                        choices=[
                            ("verify", "Verify"),
                            ("betti", "Betti numbers"),
                            ("bounds", "Norm bounds"),
                            ("render", "Render"),
                            ("all", "All suites"),
                        ],
                        max_length=10,
                    ),
                ),
                ("geometry_name", models.CharField(blank=True, max_length=255)),
                ("geometry_hash", models.CharField(max_length=64)),
                ("epsilon", models.CharField(max_length=64)),
                ("degree_cap", models.PositiveIntegerField()),
                ("seed", models.IntegerField(default=0)),
                ("weighted", models.BooleanField(default=False)),
                ("exit_status", models.PositiveSmallIntegerField(default=0)),
                ("report", models.JSONField(default=dict)),
            ],
            options={
                "ordering": ["-created_at"],
            },
        ),
        migrations.CreateModel(
            name="CheckResult",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("created_at", models.DateTimeField(default=django.utils.timezone.now)),
                ("updated_at", models.DateTimeField(auto_now=True)),
                ("is_active", models.BooleanField(default=True)),
                ("position", models.PositiveIntegerField()),
                ("name", models.CharField(max_length=100)),
                ("bigrade", models.CharField(blank=True, max_length=20)),
                (
                    "status",
                    models.CharField(
                        choices=[("pass", "Pass"), ("fail", "Fail"), ("error", "Error")],
                        max_length=10,
                    ),
                ),
                ("witness", models.CharField(blank=True, max_length=255)),
                ("values", models.JSONField(default=dict)),
                (
                    "run",
                    models.ForeignKey(
                        on_delete=django.db.models.deletion.CASCADE,
                        related_name="checks",
                        to="verification.verificationrun",
                    ),
                ),
            ],
            options={
                "ordering": ["run", "position"],
                "unique_together": {("run", "position")},
            },
        ),
    ]
